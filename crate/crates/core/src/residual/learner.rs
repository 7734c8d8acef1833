use std::collections::HashMap;

use crate::automata::{Nfa, StateSet, Word};
use crate::{Error, Limits, Result};

/// Prefixes `P`, suffixes `S` and the memoised membership answers behind them.
///
/// The row of a word `u` is the set of positions `i` with `u·S[i]` in the
/// target language; `u ≤ v` on the observed quotients iff `row(u) ⊆ row(v)`.
#[derive(Clone, Debug)]
pub struct Observations {
    prefixes: Vec<Word>,
    suffixes: Vec<Word>,
    answers: HashMap<Word, bool>,
}

impl Observations {
    fn new() -> Self {
        Observations { prefixes: vec![Vec::new()], suffixes: vec![Vec::new()], answers: HashMap::new() }
    }

    pub fn prefixes(&self) -> &[Word] {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &[Word] {
        &self.suffixes
    }

    /// Number of distinct membership questions asked so far.
    pub fn queries(&self) -> usize {
        self.answers.len()
    }

    fn ask(&mut self, teacher: &mut impl FnMut(&[u8]) -> bool, w: Word) -> bool {
        if let Some(&b) = self.answers.get(&w) {
            return b;
        }
        let b = teacher(&w);
        self.answers.insert(w, b);
        b
    }

    /// Row of `u` from recorded answers only; `None` if some entry was never asked.
    pub fn recorded_row(&self, u: &[u8]) -> Option<StateSet> {
        let mut r = StateSet::with_capacity(self.suffixes.len());
        for (i, s) in self.suffixes.iter().enumerate() {
            let mut w = u.to_vec();
            w.extend_from_slice(s);
            if *self.answers.get(&w)? {
                r.insert(i);
            }
        }
        Some(r)
    }

    /// Row of `u` over the current suffixes.
    pub fn row(&mut self, teacher: &mut impl FnMut(&[u8]) -> bool, u: &[u8]) -> StateSet {
        let mut r = StateSet::with_capacity(self.suffixes.len());
        for i in 0..self.suffixes.len() {
            let mut w = u.to_vec();
            w.extend_from_slice(&self.suffixes[i]);
            if self.ask(teacher, w) {
                r.insert(i);
            }
        }
        r
    }
}

/// Outcome of a learning run.
#[derive(Clone, Debug)]
pub struct Learned {
    pub automaton: Nfa,
    pub table: Observations,
    pub equivalence_queries: usize,
    /// Closedness and consistency repairs, plus counterexamples processed.
    pub refinements: usize,
}

fn strictly_inside(x: &StateSet, y: &StateSet) -> bool {
    x.is_subset(y) && x != y
}

/// Whether `r` is the join of the prefix rows strictly below it.
fn composite(r: &StateSet, prefix_rows: &[StateSet]) -> bool {
    let mut join = StateSet::with_capacity(r.len());
    for p in prefix_rows.iter().filter(|p| strictly_inside(p, r)) {
        join.union_with(p);
    }
    join == *r
}

enum Defect {
    Open(Word),
    Inconsistent(Word),
}

/// Scans for a closedness defect first, then a consistency defect. Prefixes,
/// letters and suffixes are visited in insertion, byte and insertion order.
fn find_defect(
    obs: &mut Observations,
    teacher: &mut impl FnMut(&[u8]) -> bool,
    alphabet: &[u8],
    rows: &[StateSet],
) -> Option<Defect> {
    let prefixes = obs.prefixes.clone();
    let mut ext: Vec<Vec<StateSet>> = Vec::with_capacity(prefixes.len());
    for u in &prefixes {
        let mut per = Vec::with_capacity(alphabet.len());
        for &a in alphabet {
            let mut ua = u.clone();
            ua.push(a);
            per.push(obs.row(teacher, &ua));
        }
        ext.push(per);
    }
    for (i, u) in prefixes.iter().enumerate() {
        for (k, &a) in alphabet.iter().enumerate() {
            let r = &ext[i][k];
            if !composite(r, rows) && !rows.contains(r) {
                let mut ua = u.clone();
                ua.push(a);
                return Some(Defect::Open(ua));
            }
        }
    }
    for i in 0..prefixes.len() {
        for j in 0..prefixes.len() {
            if i == j || !rows[i].is_subset(&rows[j]) {
                continue;
            }
            for (k, &a) in alphabet.iter().enumerate() {
                if let Some(x) = ext[i][k].difference(&ext[j][k]).next() {
                    let mut ax = vec![a];
                    ax.extend_from_slice(&obs.suffixes[x]);
                    return Some(Defect::Inconsistent(ax));
                }
            }
        }
    }
    None
}

fn hypothesis(
    obs: &mut Observations,
    teacher: &mut impl FnMut(&[u8]) -> bool,
    alphabet: &[u8],
    rows: &[StateSet],
) -> Nfa {
    let mut states: Vec<usize> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        if !composite(r, rows) && !states.iter().any(|&s| rows[s] == *r) {
            states.push(i);
        }
    }
    let mut n = Nfa::new(states.len());
    alphabet.iter().for_each(|&a| n.add_symbol(a));
    let eps = &rows[0];
    for (s, &i) in states.iter().enumerate() {
        if rows[i].is_subset(eps) {
            n.set_initial(s);
        }
        if rows[i].contains(0) {
            n.set_final(s);
        }
        for &a in alphabet {
            let mut ua = obs.prefixes[i].clone();
            ua.push(a);
            let target = obs.row(teacher, &ua);
            for (t, &j) in states.iter().enumerate() {
                if rows[j].is_subset(&target) {
                    n.add_transition(s, a, t);
                }
            }
        }
    }
    n
}

/// Active learning of the canonical RFA of the teacher's language over
/// `alphabet`. The teacher answers membership; the oracle returns a word
/// on which a hypothesis is wrong, or `None` to accept it. Every suffix of
/// a counterexample joins `S`, shortest first.
pub fn nl_learn(
    alphabet: &[u8],
    teacher: impl FnMut(&[u8]) -> bool,
    oracle: impl FnMut(&Nfa) -> Option<Word>,
    limits: &Limits,
) -> Result<Learned> {
    nl_learn_observed(alphabet, teacher, oracle, limits, |_| {})
}

/// [`nl_learn`], showing `observe` every intermediate table once the rows
/// of all its prefixes have been filled in.
pub fn nl_learn_observed(
    alphabet: &[u8],
    mut teacher: impl FnMut(&[u8]) -> bool,
    mut oracle: impl FnMut(&Nfa) -> Option<Word>,
    limits: &Limits,
    mut observe: impl FnMut(&Observations),
) -> Result<Learned> {
    let mut alphabet = alphabet.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut obs = Observations::new();
    let mut refinements = 0;
    let mut equivalence_queries = 0;
    loop {
        let prefixes = obs.prefixes.clone();
        let rows: Vec<StateSet> = prefixes.iter().map(|u| obs.row(&mut teacher, u)).collect();
        observe(&obs);
        match find_defect(&mut obs, &mut teacher, &alphabet, &rows) {
            Some(Defect::Open(ua)) => obs.prefixes.push(ua),
            Some(Defect::Inconsistent(ax)) => obs.suffixes.push(ax),
            None => {
                let h = hypothesis(&mut obs, &mut teacher, &alphabet, &rows);
                equivalence_queries += 1;
                let Some(w) = oracle(&h) else {
                    return Ok(Learned { automaton: h, table: obs, equivalence_queries, refinements });
                };
                let before = obs.suffixes.len();
                for start in (0..=w.len()).rev() {
                    let x = w[start..].to_vec();
                    if !obs.suffixes.contains(&x) {
                        obs.suffixes.push(x);
                    }
                }
                if obs.suffixes.len() == before {
                    return Err(Error::invalid("oracle returned a counterexample already covered by the table"));
                }
            }
        }
        refinements += 1;
        if refinements > limits.iteration_cap {
            return Err(Error::IterationCap { cap: limits.iteration_cap });
        }
    }
}
