//! Language-consistent quasiorders on words.
//!
//! Each quasiorder is a map from words to finite keys together with a
//! decidable comparison on keys. Keys are built incrementally: one letter at
//! a time on the left (left orders) or on the right (right orders), or by
//! concatenation (two-sided orders).

use crate::automata::{state_set, Dfa, Nfa, Ocn, StateSet};

/// Which side of a word a quasiorder is monotone on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A one-sided quasiorder with incremental keys.
pub trait WordOrder {
    type Key: Clone;

    fn side(&self) -> Side;

    /// Key of the empty word.
    fn empty_key(&self) -> Self::Key;

    /// Key of `a·w` (left orders) or `w·a` (right orders) given the key of `w`.
    fn extend(&self, key: &Self::Key, a: u8) -> Self::Key;

    fn leq(&self, x: &Self::Key, y: &Self::Key) -> bool;

    fn key_of(&self, w: &[u8]) -> Self::Key {
        let mut k = self.empty_key();
        match self.side() {
            Side::Right => w.iter().for_each(|&a| k = self.extend(&k, a)),
            Side::Left => w.iter().rev().for_each(|&a| k = self.extend(&k, a)),
        }
        k
    }

    fn leq_words(&self, u: &[u8], v: &[u8]) -> bool {
        self.leq(&self.key_of(u), &self.key_of(v))
    }
}

/// A quasiorder monotone on both sides, with keys closed under concatenation.
pub trait ContextOrder {
    type Key: Clone;

    fn empty_key(&self) -> Self::Key;
    fn letter_key(&self, a: u8) -> Self::Key;
    /// Key of `uv` from the keys of `u` and `v`.
    fn concat(&self, x: &Self::Key, y: &Self::Key) -> Self::Key;
    fn leq(&self, x: &Self::Key, y: &Self::Key) -> bool;

    fn key_of(&self, w: &[u8]) -> Self::Key {
        w.iter().fold(self.empty_key(), |k, &a| self.concat(&k, &self.letter_key(a)))
    }

    fn leq_words(&self, u: &[u8], v: &[u8]) -> bool {
        self.leq(&self.key_of(u), &self.key_of(v))
    }
}

// ---------------------------------------------------------------------------
// State-based orders

/// `post_w(I)` (right) or `pre_w(F)` (left).
pub fn state_key(n: &Nfa, w: &[u8], side: Side) -> StateSet {
    match side {
        Side::Right => n.post_word(n.initial(), w),
        Side::Left => n.pre_word(n.finals(), w),
    }
}

/// Words compared through the state sets they reach, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct StateOrder<'a> {
    nfa: &'a Nfa,
    side: Side,
}

impl<'a> StateOrder<'a> {
    pub fn new(nfa: &'a Nfa, side: Side) -> Self {
        StateOrder { nfa, side }
    }
}

impl WordOrder for StateOrder<'_> {
    type Key = StateSet;

    fn side(&self) -> Side {
        self.side
    }

    fn empty_key(&self) -> StateSet {
        match self.side {
            Side::Right => self.nfa.initial().clone(),
            Side::Left => self.nfa.finals().clone(),
        }
    }

    fn extend(&self, key: &StateSet, a: u8) -> StateSet {
        match self.side {
            Side::Right => self.nfa.post(key, a),
            Side::Left => self.nfa.pre(key, a),
        }
    }

    fn leq(&self, x: &StateSet, y: &StateSet) -> bool {
        x.is_subset(y)
    }
}

// ---------------------------------------------------------------------------
// Simulation

/// A simulation relation on the states of one automaton; `related(p, q)` means `q` simulates `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRelation {
    above: Vec<StateSet>,
}

impl SimRelation {
    pub fn related(&self, p: usize, q: usize) -> bool {
        self.above[p].contains(q)
    }

    pub fn state_count(&self) -> usize {
        self.above.len()
    }

    /// States simulating `p`.
    pub fn above(&self, p: usize) -> &StateSet {
        &self.above[p]
    }
}

/// The largest simulation on `n` (right) or on its reverse (left).
pub fn max_simulation(n: &Nfa, side: Side) -> SimRelation {
    let rev;
    let n = match side {
        Side::Right => n,
        Side::Left => {
            rev = n.reverse();
            &rev
        }
    };
    let k = n.state_count();
    let mut above: Vec<StateSet> = (0..k)
        .map(|p| state_set(k, (0..k).filter(|&q| !n.is_final(p) || n.is_final(q))))
        .collect();
    let mut changed = true;
    while changed {
        changed = false;
        for p in 0..k {
            let candidates: Vec<usize> = above[p].ones().collect();
            for q in candidates {
                let ok = n.successors(p).iter().all(|&(a, p2)| {
                    n.successors(q).iter().any(|&(b, q2)| b == a && above[p2].contains(q2))
                });
                if !ok {
                    above[p].set(q, false);
                    changed = true;
                }
            }
        }
    }
    SimRelation { above }
}

/// The universal-existential lift: every state of `u` is simulated by some state of `v`.
pub fn sim_leq(u: &StateSet, v: &StateSet, sim: &SimRelation) -> bool {
    u.ones().all(|x| !sim.above[x].is_disjoint(v))
}

/// State keys compared through a simulation.
#[derive(Clone, Debug)]
pub struct SimulationOrder<'a> {
    states: StateOrder<'a>,
    sim: SimRelation,
}

impl<'a> SimulationOrder<'a> {
    pub fn new(nfa: &'a Nfa, side: Side) -> Self {
        SimulationOrder { states: StateOrder::new(nfa, side), sim: max_simulation(nfa, side) }
    }

    pub fn relation(&self) -> &SimRelation {
        &self.sim
    }
}

impl WordOrder for SimulationOrder<'_> {
    type Key = StateSet;

    fn side(&self) -> Side {
        self.states.side
    }

    fn empty_key(&self) -> StateSet {
        self.states.empty_key()
    }

    fn extend(&self, key: &StateSet, a: u8) -> StateSet {
        self.states.extend(key, a)
    }

    fn leq(&self, x: &StateSet, y: &StateSet) -> bool {
        sim_leq(x, y, &self.sim)
    }
}

// ---------------------------------------------------------------------------
// Residual (Nerode / Myhill) orders

/// The complete minimal DFA of a language with its residual-inclusion matrix:
/// `includes(p, q)` iff the right language of `p` is contained in that of `q`.
#[derive(Clone, Debug)]
pub struct ResidualIndex {
    dfa: Dfa,
    incl: Vec<StateSet>,
    live: StateSet,
}

impl ResidualIndex {
    /// Indexes `L(lang)` over `lang`'s alphabet extended with `extra`.
    pub fn new(lang: &Nfa, extra: &[u8]) -> Self {
        Self::from_dfa(&lang.determinize(), extra)
    }

    pub fn from_dfa(d: &Dfa, extra: &[u8]) -> Self {
        let dfa = d.complete(extra).canonical_form();
        let k = dfa.state_count();
        let syms = dfa.symbols().to_vec();
        let mut incl: Vec<StateSet> = (0..k)
            .map(|p| state_set(k, (0..k).filter(|&q| !dfa.is_final(p) || dfa.is_final(q))))
            .collect();
        let mut changed = true;
        while changed {
            changed = false;
            for p in 0..k {
                let cands: Vec<usize> = incl[p].ones().collect();
                for q in cands {
                    let ok = syms.iter().all(|&a| {
                        let (p2, q2) = (dfa.delta(p, a).unwrap(), dfa.delta(q, a).unwrap());
                        incl[p2].contains(q2)
                    });
                    if !ok {
                        incl[p].set(q, false);
                        changed = true;
                    }
                }
            }
        }
        let nfa = dfa.to_nfa();
        let live = nfa.reachable_from(nfa.finals(), crate::Direction::Backward);
        ResidualIndex { dfa, incl, live }
    }

    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    pub fn state_count(&self) -> usize {
        self.dfa.state_count()
    }

    pub fn includes(&self, p: usize, q: usize) -> bool {
        self.incl[p].contains(q)
    }

    /// State reached from the initial state; symbols outside the alphabet lead
    /// to `None`, standing for the empty residual.
    pub fn state_of(&self, w: &[u8]) -> Option<usize> {
        self.dfa.run_from(self.dfa.initial_state(), w)
    }

    pub fn step(&self, p: Option<usize>, a: u8) -> Option<usize> {
        p.and_then(|p| self.dfa.delta(p, a))
    }

    /// Inclusion where `None` is the empty residual.
    pub fn includes_opt(&self, p: Option<usize>, q: Option<usize>) -> bool {
        match (p, q) {
            (None, _) => true,
            (Some(p), Some(q)) => self.includes(p, q),
            (Some(p), None) => self.is_empty_state(p),
        }
    }

    pub fn is_empty_state(&self, p: usize) -> bool {
        !self.live.contains(p)
    }
}

/// Nerode quasiorder: `u ≤ v` iff `u⁻¹L ⊆ v⁻¹L` (right) or `Lu⁻¹ ⊆ Lv⁻¹` (left).
///
/// The left order is realised on the minimal DFA of the reversed language.
#[derive(Clone, Debug)]
pub struct NerodeOrder {
    index: ResidualIndex,
    side: Side,
}

impl NerodeOrder {
    /// `extra` lists symbols outside `lang`'s alphabet that words may use.
    pub fn new(lang: &Nfa, side: Side, extra: &[u8]) -> Self {
        let index = match side {
            Side::Right => ResidualIndex::new(lang, extra),
            Side::Left => ResidualIndex::new(&lang.reverse(), extra),
        };
        NerodeOrder { index, side }
    }

    pub fn index(&self) -> &ResidualIndex {
        &self.index
    }
}

impl WordOrder for NerodeOrder {
    type Key = Option<usize>;

    fn side(&self) -> Side {
        self.side
    }

    fn empty_key(&self) -> Option<usize> {
        Some(self.index.dfa.initial_state())
    }

    fn extend(&self, key: &Option<usize>, a: u8) -> Option<usize> {
        self.index.step(*key, a)
    }

    fn leq(&self, x: &Option<usize>, y: &Option<usize>) -> bool {
        self.index.includes_opt(*x, *y)
    }
}

/// Decides the Nerode quasiorder between two words. `index` must be built on
/// `L` for the right order and on the reversed language for the left one.
pub fn nerode_leq(index: &ResidualIndex, u: &[u8], v: &[u8], side: Side) -> bool {
    let key = |w: &[u8]| match side {
        Side::Right => index.state_of(w),
        Side::Left => {
            let r: Vec<u8> = w.iter().rev().copied().collect();
            index.state_of(&r)
        }
    };
    index.includes_opt(key(u), key(v))
}

/// Myhill quasiorder: context inclusion, decided state-wise on the minimal DFA.
#[derive(Clone, Debug)]
pub struct MyhillOrder {
    index: ResidualIndex,
}

impl MyhillOrder {
    pub fn new(lang: &Nfa, extra: &[u8]) -> Self {
        MyhillOrder { index: ResidualIndex::new(lang, extra) }
    }

    pub fn from_index(index: ResidualIndex) -> Self {
        MyhillOrder { index }
    }
}

/// Transformation `p ↦ δ(p, w)` of the complete minimal DFA; `None` marks the
/// empty residual reached through a foreign symbol.
pub type Transformation = Vec<Option<usize>>;

impl ContextOrder for MyhillOrder {
    type Key = Transformation;

    fn empty_key(&self) -> Transformation {
        (0..self.index.state_count()).map(Some).collect()
    }

    fn letter_key(&self, a: u8) -> Transformation {
        (0..self.index.state_count()).map(|p| self.index.step(Some(p), a)).collect()
    }

    fn concat(&self, x: &Transformation, y: &Transformation) -> Transformation {
        x.iter().map(|p| p.and_then(|p| y[p])).collect()
    }

    fn leq(&self, x: &Transformation, y: &Transformation) -> bool {
        x.iter().zip(y).all(|(&p, &q)| self.index.includes_opt(p, q))
    }
}

/// Decides `ctx_L(u) ⊆ ctx_L(v)` on the complete minimal DFA `index`.
pub fn myhill_leq(index: &ResidualIndex, u: &[u8], v: &[u8]) -> bool {
    let order = MyhillOrder { index: index.clone() };
    order.leq_words(u, v)
}

// ---------------------------------------------------------------------------
// Context (pair-set) order

/// Relation `{(q, q') : q -w-> q'}` stored row-major in a bitset of width `n²`.
pub type PairSet = StateSet;

pub fn pair_index(n: usize, p: usize, q: usize) -> usize {
    p * n + q
}

/// `{(q, q') : q reaches q' reading w}`.
pub fn ctx_key(n: &Nfa, w: &[u8]) -> PairSet {
    let order = CtxOrder::new(n);
    order.key_of(w)
}

/// Relational composition `x ∘ y` (first `x`, then `y`).
pub fn compose(n: usize, x: &PairSet, y: &PairSet) -> PairSet {
    let mut out = PairSet::with_capacity(n * n);
    for p in 0..n {
        let mut row = StateSet::with_capacity(n);
        for r in 0..n {
            if x.contains(pair_index(n, p, r)) {
                for q in 0..n {
                    if y.contains(pair_index(n, r, q)) {
                        row.insert(q);
                    }
                }
            }
        }
        for q in row.ones() {
            out.insert(pair_index(n, p, q));
        }
    }
    out
}

/// Words compared by their state-pair relations in one automaton.
#[derive(Clone, Debug)]
pub struct CtxOrder<'a> {
    nfa: &'a Nfa,
}

impl<'a> CtxOrder<'a> {
    pub fn new(nfa: &'a Nfa) -> Self {
        CtxOrder { nfa }
    }

    /// Whether a key relates some initial state to some final state.
    pub fn accepting(&self, key: &PairSet) -> bool {
        let n = self.nfa.state_count();
        self.nfa
            .initial()
            .ones()
            .any(|p| self.nfa.finals().ones().any(|q| key.contains(pair_index(n, p, q))))
    }
}

impl ContextOrder for CtxOrder<'_> {
    type Key = PairSet;

    fn empty_key(&self) -> PairSet {
        let n = self.nfa.state_count();
        state_set(n * n, (0..n).map(|p| pair_index(n, p, p)))
    }

    fn letter_key(&self, a: u8) -> PairSet {
        let n = self.nfa.state_count();
        state_set(
            n * n,
            self.nfa.transitions().filter(|t| t.1 == a).map(|(p, _, q)| pair_index(n, p, q)),
        )
    }

    fn concat(&self, x: &PairSet, y: &PairSet) -> PairSet {
        compose(self.nfa.state_count(), x, y)
    }

    fn leq(&self, x: &PairSet, y: &PairSet) -> bool {
        x.is_subset(y)
    }
}

// ---------------------------------------------------------------------------
// One-counter nets

/// Per-state maximum counter value, `None` for unreachable states.
pub type MacroState = Vec<Option<u64>>;

/// One letter of the macro-state abstraction of an OCN.
pub fn macro_step(o: &Ocn, m: &MacroState, a: u8) -> MacroState {
    let mut out = vec![None; o.state_count()];
    for &(p, b, d, q) in o.transitions() {
        if b != a {
            continue;
        }
        if let Some(n) = m[p] {
            let v = n as i64 + d as i64;
            if v >= 0 {
                let v = v as u64;
                out[q] = Some(out[q].map_or(v, |x: u64| x.max(v)));
            }
        }
    }
    out
}

/// Macro state reached from configuration `start` after reading `w`.
pub fn ocn_macro(o: &Ocn, start: (usize, u64), w: &[u8]) -> MacroState {
    let mut m = vec![None; o.state_count()];
    m[start.0] = Some(start.1);
    for &a in w {
        m = macro_step(o, &m, a);
    }
    m
}

/// Pointwise order with `None` below every number.
pub fn macro_leq(m1: &MacroState, m2: &MacroState) -> bool {
    m1.iter().zip(m2).all(|(x, y)| match (x, y) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a <= b,
    })
}

/// Right quasiorder on words induced by macro states of an OCN.
#[derive(Clone, Debug)]
pub struct MacroOrder<'a> {
    ocn: &'a Ocn,
    start: (usize, u64),
}

impl<'a> MacroOrder<'a> {
    pub fn new(ocn: &'a Ocn, start: (usize, u64)) -> Self {
        MacroOrder { ocn, start }
    }
}

impl WordOrder for MacroOrder<'_> {
    type Key = MacroState;

    fn side(&self) -> Side {
        Side::Right
    }

    fn empty_key(&self) -> MacroState {
        ocn_macro(self.ocn, self.start, &[])
    }

    fn extend(&self, key: &MacroState, a: u8) -> MacroState {
        macro_step(self.ocn, key, a)
    }

    fn leq(&self, x: &MacroState, y: &MacroState) -> bool {
        macro_leq(x, y)
    }
}
