//! Linear-size DFAs for concatenations whose operands share one operator:
//! `a+bb+c+` (plus), `a*b*c*` (star) and `(a|b)(a|c)c` (alt).

use super::regex::{ByteSet, Regex};
use crate::automata::{Dfa, StateSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomogeneousKind {
    Plus,
    Star,
    Alt,
}

fn strip(r: &Regex) -> &Regex {
    match r {
        Regex::Group(x) => strip(x),
        _ => r,
    }
}

fn letter(r: &Regex) -> Option<u8> {
    match strip(r) {
        Regex::Literal(b) => Some(*b),
        _ => None,
    }
}

/// One operand of a homogeneous concatenation.
enum Operand {
    Letter(u8),
    Plus(u8),
    Star(u8),
    Alt(ByteSet),
}

fn operand(r: &Regex) -> Option<Operand> {
    Some(match strip(r) {
        Regex::Literal(b) => Operand::Letter(*b),
        Regex::Plus(x) => Operand::Plus(letter(x)?),
        Regex::Star(x) => Operand::Star(letter(x)?),
        Regex::Alt(xs) => {
            let mut s = ByteSet::empty();
            for x in xs {
                s.insert(letter(x)?);
            }
            Operand::Alt(s)
        }
        _ => return None,
    })
}

fn operands(ast: &Regex) -> Option<Vec<Operand>> {
    match strip(ast) {
        Regex::Concat(xs) => xs.iter().map(operand).collect(),
        single => Some(vec![operand(single)?]),
    }
}

/// Classifies `ast` in one pass over its operands. Plain letters may mix with
/// `+` or `|` operands; a star expression must star every letter. A bare
/// word of letters counts as `Alt`, whose chain automaton it matches.
pub fn homogeneous_kind(ast: &Regex) -> Option<HomogeneousKind> {
    let ops = operands(ast)?;
    let (mut plus, mut star, mut alt, mut letters) = (false, false, false, false);
    for op in &ops {
        match op {
            Operand::Letter(_) => letters = true,
            Operand::Plus(_) => plus = true,
            Operand::Star(_) => star = true,
            Operand::Alt(_) => alt = true,
        }
    }
    match (plus, star, alt) {
        (true, false, false) => Some(HomogeneousKind::Plus),
        (false, true, false) if !letters => Some(HomogeneousKind::Star),
        (false, false, _) => Some(HomogeneousKind::Alt),
        _ => None,
    }
}

fn dfa_over(n: usize, finals: impl IntoIterator<Item = usize>, edges: &[(usize, u8, usize)]) -> Dfa {
    let mut symbols: Vec<u8> = edges.iter().map(|e| e.1).collect();
    symbols.sort_unstable();
    symbols.dedup();
    let mut next = vec![vec![None; symbols.len()]; n];
    for &(p, a, q) in edges {
        let i = symbols.binary_search(&a).unwrap();
        debug_assert!(next[p][i].is_none_or(|old| old == q), "construction must stay deterministic");
        next[p][i] = Some(q);
    }
    let mut f = StateSet::with_capacity(n);
    finals.into_iter().for_each(|q| f.insert(q));
    Dfa::from_table(symbols, 0, f, next)
}

/// DFA for a homogeneous expression of the given kind. Returns `None` when
/// `ast` is not of that kind.
pub fn homogeneous_dfa(ast: &Regex, kind: HomogeneousKind) -> Option<Dfa> {
    if homogeneous_kind(ast) != Some(kind) {
        return None;
    }
    let ops = operands(ast)?;
    Some(match kind {
        HomogeneousKind::Plus => plus_dfa(&ops),
        HomogeneousKind::Star => star_dfa(&ops),
        HomogeneousKind::Alt => alt_dfa(&ops),
    })
}

fn plus_dfa(ops: &[Operand]) -> Dfa {
    let word: Vec<(u8, bool)> = ops
        .iter()
        .map(|op| match op {
            Operand::Letter(a) => (*a, false),
            Operand::Plus(a) => (*a, true),
            _ => unreachable!(),
        })
        .collect();
    // Within a run of equal letters only the last one may loop: `a+a` reads as `aa+`.
    let n = word.len();
    let mut looped = vec![false; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && word[j + 1].0 == word[i].0 {
            j += 1;
        }
        looped[j] = word[i..=j].iter().any(|w| w.1);
        i = j + 1;
    }
    let mut edges = Vec::new();
    for (k, &(a, _)) in word.iter().enumerate() {
        edges.push((k, a, k + 1));
        if looped[k] {
            edges.push((k + 1, a, k + 1));
        }
    }
    dfa_over(n + 1, [n], &edges)
}

fn star_dfa(ops: &[Operand]) -> Dfa {
    let mut word: Vec<u8> = ops
        .iter()
        .map(|op| match op {
            Operand::Star(a) => *a,
            _ => unreachable!(),
        })
        .collect();
    word.dedup();
    let n = word.len();
    let mut edges = Vec::new();
    // From q_i on letter a go to the least index j ≥ i with a_j = a (state j
    // reading it as a self-loop when j = i); smaller indices have larger residuals.
    for i in 0..=n {
        let mut seen = ByteSet::empty();
        if i > 0 {
            edges.push((i, word[i - 1], i));
            seen.insert(word[i - 1]);
        }
        for (j, &a) in word.iter().enumerate().skip(i) {
            if !seen.contains(a) {
                seen.insert(a);
                edges.push((i, a, j + 1));
            }
        }
    }
    dfa_over(n + 1, 0..=n, &edges)
}

fn alt_dfa(ops: &[Operand]) -> Dfa {
    let mut edges = Vec::new();
    for (k, op) in ops.iter().enumerate() {
        let set = match op {
            Operand::Letter(a) => ByteSet::single(*a),
            Operand::Alt(s) => *s,
            _ => unreachable!(),
        };
        edges.extend(set.iter().map(|a| (k, a, k + 1)));
    }
    dfa_over(ops.len() + 1, [ops.len()], &edges)
}
