//! Brute-force decision procedures used as reference answers.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{CnfGrammar, Dfa, Nfa, StateSet, Verdict, Word};

fn joint_alphabet(a: &BTreeSet<u8>, b: &BTreeSet<u8>) -> Vec<u8> {
    a.union(b).copied().collect()
}

/// Decides `L(a) ⊆ L(b)` through determinization and complementation of `b`.
/// The witness is a shortest word of `L(a) \ L(b)`.
pub fn naive_inclusion(a: &Nfa, b: &Nfa) -> Verdict {
    let sigma = joint_alphabet(a.alphabet(), b.alphabet());
    let co_b = b.determinize().complement(&sigma);
    // BFS over pairs (state of a, state of complement(b)).
    let start = co_b.initial_state();
    let mut parent: HashMap<(usize, usize), Option<((usize, usize), u8)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for p in a.initial().ones() {
        parent.insert((p, start), None);
        queue.push_back((p, start));
    }
    while let Some((p, d)) = queue.pop_front() {
        if a.is_final(p) && co_b.is_final(d) {
            let mut w = Vec::new();
            let mut cur = (p, d);
            while let Some(Some((prev, c))) = parent.get(&cur) {
                w.push(*c);
                cur = *prev;
            }
            w.reverse();
            return Verdict::not_included(Some(w));
        }
        for &(c, q) in a.successors(p) {
            let e = co_b.delta(d, c).expect("complement is complete");
            if let std::collections::hash_map::Entry::Vacant(v) = parent.entry((q, e)) {
                v.insert(Some(((p, d), c)));
                queue.push_back((q, e));
            }
        }
    }
    Verdict::included()
}

/// Shortest (then lexicographically least) word accepted by exactly one of the automata.
pub fn equivalence_counterexample(a: &Nfa, b: &Nfa) -> Option<Word> {
    let sigma = joint_alphabet(a.alphabet(), b.alphabet());
    let start = (a.initial().clone(), b.initial().clone());
    let mut parent: HashMap<(StateSet, StateSet), Option<((StateSet, StateSet), u8)>> =
        HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some((s, t)) = queue.pop_front() {
        let acc_a = !s.is_disjoint(a.finals());
        let acc_b = !t.is_disjoint(b.finals());
        if acc_a != acc_b {
            let mut w = Vec::new();
            let mut cur = (s, t);
            while let Some(Some((prev, c))) = parent.get(&cur) {
                w.push(*c);
                cur = prev.clone();
            }
            w.reverse();
            return Some(w);
        }
        for &c in &sigma {
            let nxt = (a.post(&s, c), b.post(&t, c));
            if !parent.contains_key(&nxt) {
                parent.insert(nxt.clone(), Some(((s.clone(), t.clone()), c)));
                queue.push_back(nxt);
            }
        }
    }
    None
}

/// Decides `L(g) ⊆ L(d)` by emptiness of the product of `g` with the complement of `d`.
/// The witness is extracted from a shortest derivation.
pub fn cfg_in_regular_oracle(g: &CnfGrammar, d: &Dfa) -> Verdict {
    let sigma: Vec<u8> = {
        let mut s = g.alphabet();
        s.extend(d.symbols().iter().copied());
        s.into_iter().collect()
    };
    let c = d.complement(&sigma);
    let n = c.state_count();
    let v = g.variable_count();
    const INF: u64 = u64::MAX;
    #[derive(Clone, Copy)]
    enum How {
        Leaf(u8),
        Split(usize, usize, usize),
    }
    // len[x][p][q]: length of a shortest word w with X_x ⇒* w and δ(p, w) = q.
    let mut len = vec![vec![vec![INF; n]; n]; v];
    let mut how: Vec<Vec<Vec<Option<How>>>> = vec![vec![vec![None; n]; n]; v];
    for x in 0..v {
        for &a in g.terminal_rules(x) {
            for p in 0..n {
                let q = c.delta(p, a).unwrap();
                if len[x][p][q] > 1 {
                    len[x][p][q] = 1;
                    how[x][p][q] = Some(How::Leaf(a));
                }
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..v {
            for &(y, z) in g.binary_rules(x) {
                for p in 0..n {
                    for r in 0..n {
                        let l1 = len[y][p][r];
                        if l1 == INF {
                            continue;
                        }
                        for q in 0..n {
                            let l2 = len[z][r][q];
                            if l2 == INF {
                                continue;
                            }
                            let total = l1.saturating_add(l2);
                            if total < len[x][p][q] {
                                len[x][p][q] = total;
                                how[x][p][q] = Some(How::Split(y, z, r));
                                changed = true;
                            }
                        }
                    }
                }
            }
        }
    }
    let init = c.initial_state();
    if g.has_epsilon() && c.is_final(init) {
        return Verdict::not_included(Some(Vec::new()));
    }
    let best = (0..n).filter(|&q| c.is_final(q) && len[0][init][q] != INF).min_by_key(|&q| len[0][init][q]);
    let Some(q) = best else {
        return Verdict::included();
    };
    fn extract(how: &[Vec<Vec<Option<How>>>], x: usize, p: usize, q: usize, out: &mut Word) {
        match how[x][p][q].expect("derivation recorded") {
            How::Leaf(a) => out.push(a),
            How::Split(y, z, r) => {
                extract(how, y, p, r, out);
                extract(how, z, r, q, out);
            }
        }
    }
    let mut w = Vec::new();
    extract(&how, 0, init, q, &mut w);
    Verdict::not_included(Some(w))
}
