//! Finite automata, CNF grammars and one-counter nets over the byte alphabet.
//!
//! States are dense indices and sets of states are [`StateSet`] bitsets whose
//! width equals the automaton's state count.

mod grammar;
mod ocn;
mod oracle;
pub mod text;

pub use grammar::CnfGrammar;
pub use ocn::{Ocn, OcnTransition};
pub use oracle::{cfg_in_regular_oracle, equivalence_counterexample, naive_inclusion};

use std::collections::{BTreeSet, HashMap, VecDeque};

pub use fixedbitset::FixedBitSet as StateSet;

/// A finite word over bytes.
pub type Word = Vec<u8>;

/// Reading direction for the successor/predecessor relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `post`: follow transitions forwards, starting from the initial states.
    Forward,
    /// `pre`: follow transitions backwards, starting from the final states.
    Backward,
}

/// Result of an inclusion check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub included: bool,
    /// A word of the left language outside the right one, when the algorithm can name one.
    pub witness: Option<Word>,
}

impl Verdict {
    pub fn included() -> Self {
        Verdict { included: true, witness: None }
    }

    pub fn not_included(witness: Option<Word>) -> Self {
        Verdict { included: false, witness }
    }
}

/// Builds a state set of the given width from an iterator of members.
pub fn state_set(width: usize, members: impl IntoIterator<Item = usize>) -> StateSet {
    let mut s = StateSet::with_capacity(width);
    for q in members {
        s.insert(q);
    }
    s
}

/// A nondeterministic finite automaton without ε-transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: BTreeSet<u8>,
    out: Vec<Vec<(u8, usize)>>,
    inc: Vec<Vec<(u8, usize)>>,
    initial: StateSet,
    finals: StateSet,
}

impl Nfa {
    /// An automaton with `states` states, no transitions, and empty initial/final sets.
    pub fn new(states: usize) -> Self {
        Nfa {
            alphabet: BTreeSet::new(),
            out: vec![Vec::new(); states],
            inc: vec![Vec::new(); states],
            initial: StateSet::with_capacity(states),
            finals: StateSet::with_capacity(states),
        }
    }

    /// Convenience constructor used heavily in tests.
    pub fn from_parts(
        states: usize,
        initial: &[usize],
        finals: &[usize],
        transitions: &[(usize, u8, usize)],
    ) -> Self {
        let mut n = Nfa::new(states);
        for &q in initial {
            n.set_initial(q);
        }
        for &q in finals {
            n.set_final(q);
        }
        for &(p, a, q) in transitions {
            n.add_transition(p, a, q);
        }
        n
    }

    pub fn state_count(&self) -> usize {
        self.out.len()
    }

    pub fn add_state(&mut self) -> usize {
        let id = self.out.len();
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.initial.grow(id + 1);
        self.finals.grow(id + 1);
        id
    }

    pub fn add_symbol(&mut self, a: u8) {
        self.alphabet.insert(a);
    }

    /// Adds `p -a-> q`; duplicates are ignored. The symbol joins the alphabet.
    pub fn add_transition(&mut self, p: usize, a: u8, q: usize) {
        assert!(p < self.state_count() && q < self.state_count(), "state out of range");
        self.alphabet.insert(a);
        if let Err(pos) = self.out[p].binary_search(&(a, q)) {
            self.out[p].insert(pos, (a, q));
            let pos = self.inc[q].binary_search(&(a, p)).unwrap_err();
            self.inc[q].insert(pos, (a, p));
        }
    }

    pub fn set_initial(&mut self, q: usize) {
        assert!(q < self.state_count(), "state out of range");
        self.initial.insert(q);
    }

    pub fn set_final(&mut self, q: usize) {
        assert!(q < self.state_count(), "state out of range");
        self.finals.insert(q);
    }

    pub fn initial(&self) -> &StateSet {
        &self.initial
    }

    pub fn finals(&self) -> &StateSet {
        &self.finals
    }

    pub fn is_initial(&self, q: usize) -> bool {
        self.initial.contains(q)
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(q)
    }

    /// Replaces the initial set; the width must match the state count.
    pub fn with_initial(&self, initial: StateSet) -> Nfa {
        let mut n = self.clone();
        n.initial = resized(initial, self.state_count());
        n
    }

    pub fn with_finals(&self, finals: StateSet) -> Nfa {
        let mut n = self.clone();
        n.finals = resized(finals, self.state_count());
        n
    }

    pub fn alphabet(&self) -> &BTreeSet<u8> {
        &self.alphabet
    }

    /// Outgoing `(symbol, target)` pairs of `p`, sorted.
    pub fn successors(&self, p: usize) -> &[(u8, usize)] {
        &self.out[p]
    }

    /// Incoming `(symbol, source)` pairs of `q`, sorted.
    pub fn predecessors(&self, q: usize) -> &[(u8, usize)] {
        &self.inc[q]
    }

    /// All transitions `(p, a, q)` ordered by source, then symbol, then target.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, u8, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(p, v)| v.iter().map(move |&(a, q)| (p, a, q)))
    }

    pub fn transition_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::with_capacity(self.state_count())
    }

    pub fn full_set(&self) -> StateSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `post_a(s)`.
    pub fn post(&self, s: &StateSet, a: u8) -> StateSet {
        let mut r = self.empty_set();
        for p in s.ones() {
            for &(b, q) in &self.out[p] {
                if b == a {
                    r.insert(q);
                }
            }
        }
        r
    }

    /// `pre_a(s)`.
    pub fn pre(&self, s: &StateSet, a: u8) -> StateSet {
        let mut r = self.empty_set();
        for q in s.ones() {
            for &(b, p) in &self.inc[q] {
                if b == a {
                    r.insert(p);
                }
            }
        }
        r
    }

    pub fn step(&self, s: &StateSet, a: u8, dir: Direction) -> StateSet {
        match dir {
            Direction::Forward => self.post(s, a),
            Direction::Backward => self.pre(s, a),
        }
    }

    /// `post_w(I)` for forward and `pre_w(F)` for backward.
    pub fn run(&self, w: &[u8], dir: Direction) -> StateSet {
        match dir {
            Direction::Forward => self.post_word(&self.initial, w),
            Direction::Backward => self.pre_word(&self.finals, w),
        }
    }

    pub fn post_word(&self, s: &StateSet, w: &[u8]) -> StateSet {
        let mut cur = s.clone();
        for &a in w {
            cur = self.post(&cur, a);
        }
        cur
    }

    pub fn pre_word(&self, s: &StateSet, w: &[u8]) -> StateSet {
        let mut cur = s.clone();
        for &a in w.iter().rev() {
            cur = self.pre(&cur, a);
        }
        cur
    }

    pub fn accepts(&self, w: &[u8]) -> bool {
        !self.run(w, Direction::Forward).is_disjoint(&self.finals)
    }

    pub fn reverse(&self) -> Nfa {
        let mut r = Nfa::new(self.state_count());
        r.alphabet = self.alphabet.clone();
        for (p, a, q) in self.transitions() {
            r.add_transition(q, a, p);
        }
        r.initial = self.finals.clone();
        r.finals = self.initial.clone();
        r
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.count_ones(..) == 1
            && self.out.iter().all(|v| v.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Reachable-subset construction. Each DFA state remembers its subset.
    pub fn determinize(&self) -> Dfa {
        let symbols: Vec<u8> = self.alphabet.iter().copied().collect();
        let mut index: HashMap<StateSet, usize> = HashMap::new();
        let mut subsets: Vec<StateSet> = Vec::new();
        let mut next: Vec<Vec<Option<usize>>> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(self.initial.clone(), 0);
        subsets.push(self.initial.clone());
        queue.push_back(0);
        while let Some(i) = queue.pop_front() {
            let mut row = vec![None; symbols.len()];
            for (k, &a) in symbols.iter().enumerate() {
                let t = self.post(&subsets[i], a);
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        let j = subsets.len();
                        index.insert(t.clone(), j);
                        subsets.push(t);
                        queue.push_back(j);
                        j
                    }
                };
                row[k] = Some(j);
            }
            if next.len() <= i {
                next.resize(i + 1, Vec::new());
            }
            next[i] = row;
        }
        next.resize(subsets.len(), Vec::new());
        let finals = state_set(
            subsets.len(),
            (0..subsets.len()).filter(|&i| !subsets[i].is_disjoint(&self.finals)),
        );
        let mut d = Dfa::from_table(symbols, 0, finals, next);
        d.subsets = Some(subsets);
        d
    }

    /// Keeps only states that are both reachable and co-reachable.
    /// An automaton with empty language becomes a single non-final initial state.
    pub fn trim(&self) -> Nfa {
        let fwd = self.reachable_from(&self.initial, Direction::Forward);
        let bwd = self.reachable_from(&self.finals, Direction::Backward);
        let mut keep = fwd;
        keep.intersect_with(&bwd);
        let map: Vec<Option<usize>> = {
            let mut k = 0;
            (0..self.state_count())
                .map(|q| {
                    if keep.contains(q) {
                        k += 1;
                        Some(k - 1)
                    } else {
                        None
                    }
                })
                .collect()
        };
        let count = keep.count_ones(..);
        if count == 0 {
            let mut n = Nfa::new(1);
            n.alphabet = self.alphabet.clone();
            n.set_initial(0);
            return n;
        }
        let mut n = Nfa::new(count);
        n.alphabet = self.alphabet.clone();
        for (p, a, q) in self.transitions() {
            if let (Some(p2), Some(q2)) = (map[p], map[q]) {
                n.add_transition(p2, a, q2);
            }
        }
        for q in self.initial.ones() {
            if let Some(q2) = map[q] {
                n.set_initial(q2);
            }
        }
        for q in self.finals.ones() {
            if let Some(q2) = map[q] {
                n.set_final(q2);
            }
        }
        n
    }

    /// All states reachable from `start` (inclusive) in the given direction.
    pub fn reachable_from(&self, start: &StateSet, dir: Direction) -> StateSet {
        let mut seen = start.clone();
        let mut stack: Vec<usize> = start.ones().collect();
        while let Some(p) = stack.pop() {
            let edges = match dir {
                Direction::Forward => &self.out[p],
                Direction::Backward => &self.inc[p],
            };
            for &(_, q) in edges {
                if !seen.put(q) {
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// Disjoint union; states of `other` are shifted by `self.state_count()`.
    pub fn union(&self, other: &Nfa) -> Nfa {
        let k = self.state_count();
        let mut n = Nfa::new(k + other.state_count());
        n.alphabet = self.alphabet.union(&other.alphabet).copied().collect();
        for (p, a, q) in self.transitions() {
            n.add_transition(p, a, q);
        }
        for (p, a, q) in other.transitions() {
            n.add_transition(p + k, a, q + k);
        }
        for q in self.initial.ones() {
            n.set_initial(q);
        }
        for q in self.finals.ones() {
            n.set_final(q);
        }
        for q in other.initial.ones() {
            n.set_initial(q + k);
        }
        for q in other.finals.ones() {
            n.set_final(q + k);
        }
        n
    }

    /// Shortest accepted word, if any (BFS, symbols in increasing order).
    pub fn shortest_accepted(&self) -> Option<Word> {
        let mut parent: Vec<Option<(usize, u8)>> = vec![None; self.state_count()];
        let mut seen = self.initial.clone();
        let mut queue: VecDeque<usize> = self.initial.ones().collect();
        while let Some(p) = queue.pop_front() {
            if self.finals.contains(p) {
                let mut w = Vec::new();
                let mut cur = p;
                while let Some((prev, a)) = parent[cur] {
                    w.push(a);
                    cur = prev;
                }
                w.reverse();
                return Some(w);
            }
            for &(a, q) in &self.out[p] {
                if !seen.put(q) {
                    parent[q] = Some((p, a));
                    queue.push_back(q);
                }
            }
        }
        None
    }

    pub fn is_empty_language(&self) -> bool {
        self.shortest_accepted().is_none()
    }
}

fn resized(mut s: StateSet, width: usize) -> StateSet {
    assert!(s.ones().all(|q| q < width), "state set wider than automaton");
    s.grow(width);
    let mut t = StateSet::with_capacity(width);
    t.union_with(&s);
    t
}

/// A deterministic automaton with a single initial state and partial transition table.
#[derive(Clone, Debug)]
pub struct Dfa {
    symbols: Vec<u8>,
    sym_index: Vec<Option<usize>>,
    initial: usize,
    finals: StateSet,
    next: Vec<Vec<Option<usize>>>,
    subsets: Option<Vec<StateSet>>,
}

impl PartialEq for Dfa {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
            && self.initial == other.initial
            && self.finals == other.finals
            && self.next == other.next
    }
}

impl Eq for Dfa {}

impl Dfa {
    /// Builds a DFA from a table `next[state][symbol position]`.
    pub fn from_table(
        symbols: Vec<u8>,
        initial: usize,
        finals: StateSet,
        next: Vec<Vec<Option<usize>>>,
    ) -> Dfa {
        let mut sym_index = vec![None; 256];
        for (k, &a) in symbols.iter().enumerate() {
            sym_index[a as usize] = Some(k);
        }
        assert!(initial < next.len().max(1));
        let mut finals = finals;
        finals.grow(next.len());
        Dfa { symbols, sym_index, initial, finals, next, subsets: None }
    }

    /// Checks the determinism invariants and converts.
    pub fn from_nfa(n: &Nfa) -> crate::Result<Dfa> {
        if !n.is_deterministic() {
            return Err(crate::Error::invalid("automaton is not deterministic"));
        }
        let symbols: Vec<u8> = n.alphabet().iter().copied().collect();
        let mut d = Dfa::from_table(
            symbols.clone(),
            n.initial().ones().next().unwrap(),
            n.finals().clone(),
            vec![vec![None; symbols.len()]; n.state_count()],
        );
        for (p, a, q) in n.transitions() {
            let k = d.sym_index[a as usize].unwrap();
            d.next[p][k] = Some(q);
        }
        Ok(d)
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut n = Nfa::new(self.state_count());
        for &a in &self.symbols {
            n.add_symbol(a);
        }
        n.set_initial(self.initial);
        for q in self.finals.ones() {
            n.set_final(q);
        }
        for p in 0..self.state_count() {
            for (k, t) in self.next[p].iter().enumerate() {
                if let Some(q) = t {
                    n.add_transition(p, self.symbols[k], *q);
                }
            }
        }
        n
    }

    pub fn state_count(&self) -> usize {
        self.next.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &StateSet {
        &self.finals
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(q)
    }

    /// Subset of the source NFA that produced state `q`, when built by `determinize`.
    pub fn subset(&self, q: usize) -> Option<&StateSet> {
        self.subsets.as_ref().map(|s| &s[q])
    }

    pub fn delta(&self, p: usize, a: u8) -> Option<usize> {
        self.sym_index[a as usize].and_then(|k| self.next[p][k])
    }

    pub fn run_from(&self, p: usize, w: &[u8]) -> Option<usize> {
        let mut cur = p;
        for &a in w {
            cur = self.delta(cur, a)?;
        }
        Some(cur)
    }

    pub fn accepts(&self, w: &[u8]) -> bool {
        self.run_from(self.initial, w).is_some_and(|q| self.is_final(q))
    }

    pub fn is_complete_over(&self, alphabet: &[u8]) -> bool {
        alphabet.iter().all(|&a| self.sym_index[a as usize].is_some())
            && self.next.iter().all(|row| row.iter().all(Option::is_some))
    }

    /// Total DFA over `self.symbols ∪ alphabet`, adding a sink state when needed.
    pub fn complete(&self, alphabet: &[u8]) -> Dfa {
        let mut symbols: BTreeSet<u8> = self.symbols.iter().copied().collect();
        symbols.extend(alphabet.iter().copied());
        let symbols: Vec<u8> = symbols.into_iter().collect();
        let n = self.state_count();
        let mut next: Vec<Vec<Option<usize>>> = (0..n)
            .map(|p| symbols.iter().map(|&a| self.delta(p, a)).collect())
            .collect();
        let needs_sink = next.iter().any(|r| r.iter().any(Option::is_none));
        if needs_sink {
            for row in next.iter_mut() {
                for t in row.iter_mut() {
                    if t.is_none() {
                        *t = Some(n);
                    }
                }
            }
            next.push(vec![Some(n); symbols.len()]);
        }
        let mut d = Dfa::from_table(symbols, self.initial, self.finals.clone(), next);
        if let Some(subs) = &self.subsets {
            let mut subs = subs.clone();
            if needs_sink {
                subs.push(StateSet::with_capacity(subs.first().map_or(0, |s| s.len())));
            }
            d.subsets = Some(subs);
        }
        d
    }

    /// Complement relative to `(self.symbols ∪ alphabet)*`.
    pub fn complement(&self, alphabet: &[u8]) -> Dfa {
        let mut d = self.complete(alphabet);
        d.finals.toggle_range(..);
        d
    }

    /// Synchronous product, keeping only reachable pairs; `accept` decides finality.
    pub fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Dfa {
        let symbols: Vec<u8> = {
            let mut s: BTreeSet<u8> = self.symbols.iter().copied().collect();
            s.extend(other.symbols.iter().copied());
            s.into_iter().collect()
        };
        let a = self.complete(&symbols);
        let b = other.complete(&symbols);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(a.initial, b.initial)];
        index.insert(pairs[0], 0);
        let mut next = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = Vec::with_capacity(symbols.len());
            for &c in &symbols {
                let t = (a.delta(p, c).unwrap(), b.delta(q, c).unwrap());
                let j = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                row.push(Some(j));
            }
            next.push(row);
            i += 1;
        }
        let finals = state_set(
            pairs.len(),
            (0..pairs.len()).filter(|&k| accept(a.is_final(pairs[k].0), b.is_final(pairs[k].1))),
        );
        Dfa::from_table(symbols, 0, finals, next)
    }

    /// The DFA whose initial state is `q` (right language `W_{q,F}`).
    pub fn from_state(&self, q: usize) -> Dfa {
        let mut d = self.clone();
        d.initial = q;
        d.subsets = None;
        d
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> StateSet {
        let mut seen = state_set(self.state_count(), [self.initial]);
        let mut stack = vec![self.initial];
        while let Some(p) = stack.pop() {
            for q in self.next[p].iter().flatten() {
                if !seen.put(*q) {
                    stack.push(*q);
                }
            }
        }
        seen
    }

    /// Complete minimal DFA (a sink is kept when the language needs one),
    /// states numbered in BFS order over increasing symbols. Two DFAs over the
    /// same alphabet accept the same language iff their canonical forms are equal.
    pub fn canonical_form(&self) -> Dfa {
        let total = self.complete(&[]);
        let reach = total.reachable();
        let states: Vec<usize> = reach.ones().collect();
        let classes = moore_partition(&total, &states);
        // BFS renumbering starting at the class of the initial state.
        let k = total.symbols.len();
        let mut order: Vec<usize> = Vec::new();
        let mut newid: HashMap<usize, usize> = HashMap::new();
        let rep = |c: usize| states[classes.iter().position(|&x| x == c).unwrap()];
        let init_c = classes[states.iter().position(|&s| s == total.initial).unwrap()];
        newid.insert(init_c, 0);
        order.push(init_c);
        let mut i = 0;
        let class_of = |s: usize| classes[states.binary_search(&s).unwrap()];
        let mut next = Vec::new();
        while i < order.len() {
            let r = rep(order[i]);
            let mut row = Vec::with_capacity(k);
            for pos in 0..k {
                let t = class_of(total.next[r][pos].unwrap());
                let id = *newid.entry(t).or_insert_with(|| {
                    order.push(t);
                    order.len() - 1
                });
                row.push(Some(id));
            }
            next.push(row);
            i += 1;
        }
        let finals = state_set(order.len(), (0..order.len()).filter(|&j| total.is_final(rep(order[j]))));
        Dfa::from_table(total.symbols.clone(), 0, finals, next)
    }

    /// Minimal DFA without a dead state (the empty language yields one non-final state).
    pub fn minimize(&self) -> Dfa {
        let c = self.canonical_form();
        c.drop_dead()
    }

    /// Removes states whose right language is empty, keeping the initial state.
    fn drop_dead(&self) -> Dfa {
        let n = self.to_nfa();
        let live = n.reachable_from(n.finals(), Direction::Backward);
        let keep: Vec<usize> = (0..self.state_count())
            .filter(|&q| live.contains(q) || q == self.initial)
            .collect();
        let mut map = vec![None; self.state_count()];
        for (i, &q) in keep.iter().enumerate() {
            map[q] = Some(i);
        }
        let next = keep
            .iter()
            .map(|&p| {
                self.next[p]
                    .iter()
                    .map(|t| t.and_then(|q| if live.contains(q) { map[q] } else { None }))
                    .collect()
            })
            .collect();
        let finals = state_set(keep.len(), keep.iter().enumerate().filter(|(_, &q)| self.is_final(q)).map(|(i, _)| i));
        Dfa::from_table(self.symbols.clone(), map[self.initial].unwrap(), finals, next)
    }

    /// Language equality, decided through canonical forms over a shared alphabet.
    pub fn equivalent(&self, other: &Dfa) -> bool {
        let sigma: Vec<u8> = {
            let mut s: BTreeSet<u8> = self.symbols.iter().copied().collect();
            s.extend(other.symbols.iter().copied());
            s.into_iter().collect()
        };
        self.complete(&sigma).canonical_form() == other.complete(&sigma).canonical_form()
    }

    pub fn is_empty_language(&self) -> bool {
        self.reachable().ones().all(|q| !self.is_final(q))
    }
}

/// Moore partition refinement on a complete DFA restricted to `states` (sorted).
/// Returns a class id per entry of `states`.
fn moore_partition(d: &Dfa, states: &[usize]) -> Vec<usize> {
    let pos = |s: usize| states.binary_search(&s).unwrap();
    let mut class: Vec<usize> = states.iter().map(|&s| usize::from(d.is_final(s))).collect();
    loop {
        let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next_class = Vec::with_capacity(states.len());
        for (i, &s) in states.iter().enumerate() {
            let sig: Vec<usize> = d.next[s].iter().map(|t| class[pos(t.unwrap())]).collect();
            let len = sig_index.len();
            let c = *sig_index.entry((class[i], sig)).or_insert(len);
            next_class.push(c);
        }
        let before = class.iter().collect::<BTreeSet<_>>().len();
        let after = sig_index.len();
        class = next_class;
        if before == after {
            return class;
        }
    }
}

#[cfg(test)]
mod tests;
