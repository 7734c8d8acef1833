//! Inclusion checks: word-based Kleene iteration under a quasiorder,
//! state-set antichains (forward and backward), a greatest-fixpoint check on
//! DFA-represented languages, context-free left-hand sides, and one-counter
//! trace sets on the right.

use std::collections::BTreeSet;

use crate::automata::{CnfGrammar, Dfa, Nfa, Ocn, StateSet, Verdict, Word};
use crate::fixpoint::{kleene, vectors_equivalent, Antichain, Limits};
use crate::quasiorder::{
    ContextOrder, CtxOrder, MacroOrder, NerodeOrder, PairSet, Side, SimulationOrder, StateOrder, WordOrder,
};
use crate::Result;

/// Full outcome of a fixpoint-based check.
#[derive(Clone, Debug)]
pub struct Run {
    pub verdict: Verdict,
    pub iterations: usize,
    /// Representative words of the final antichains, one list per component.
    pub fixpoint: Vec<Vec<Word>>,
}

type Vector<K> = Vec<Antichain<K, Word>>;

fn words_of<K>(v: &Vector<K>) -> Vec<Vec<Word>> {
    v.iter().map(|ac| ac.tags().cloned().collect()).collect()
}

/// Kleene iteration over vectors of word antichains indexed by the states of `n1`.
///
/// Left: component `q` collects words read from `q` to a final state, built
/// by prepending letters. Right: component `q` collects words read from an
/// initial state to `q`, built by appending letters. Each new iterate starts
/// with the previous one, so among equivalent keys older words survive.
fn automaton_lfp<K: Clone>(
    n1: &Nfa,
    side: Side,
    empty_key: K,
    extend: impl Fn(&K, u8) -> K,
    leq: impl Fn(&K, &K) -> bool + Copy,
    limits: &Limits,
    mut observe: impl FnMut(&Vector<K>),
) -> Result<(Vector<K>, usize)> {
    let n = n1.state_count();
    let seeds = match side {
        Side::Left => n1.finals(),
        Side::Right => n1.initial(),
    };
    let step = |y: &Vector<K>| -> Vector<K> {
        (0..n)
            .map(|q| {
                let mut ac = y[q].clone();
                if seeds.contains(q) {
                    ac.insert(empty_key.clone(), Vec::new(), leq);
                }
                match side {
                    Side::Left => {
                        for &(a, q2) in n1.successors(q) {
                            for (k, w) in y[q2].iter() {
                                let mut aw = Vec::with_capacity(w.len() + 1);
                                aw.push(a);
                                aw.extend_from_slice(w);
                                ac.insert(extend(k, a), aw, leq);
                            }
                        }
                    }
                    Side::Right => {
                        for &(a, q0) in n1.predecessors(q) {
                            for (k, w) in y[q0].iter() {
                                let mut wa = w.clone();
                                wa.push(a);
                                ac.insert(extend(k, a), wa, leq);
                            }
                        }
                    }
                }
                ac
            })
            .collect()
    };
    let fp = kleene(
        |y| {
            let next = step(y);
            observe(&next);
            next
        },
        vec![Antichain::new(); n],
        |a, b| vectors_equivalent(a, b, leq),
        limits,
    )?;
    Ok((fp.value, fp.iterations))
}

/// Components whose words make up the left language.
fn checked_components(n1: &Nfa, side: Side) -> &StateSet {
    match side {
        Side::Left => n1.initial(),
        Side::Right => n1.finals(),
    }
}

/// Shortest, then lexicographically least, word among the candidates.
fn least_word<'a>(ws: impl Iterator<Item = &'a Word>) -> Option<Word> {
    ws.min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))).cloned()
}

/// Word-based inclusion `L(n1) ⊆ L2` for a quasiorder consistent with `L2`,
/// whose membership predicate is `member`. The witness is the first failing
/// word in component order.
pub fn fa_inc_word<O: WordOrder>(
    n1: &Nfa,
    qo: &O,
    member: impl Fn(&[u8]) -> bool,
    limits: &Limits,
) -> Result<Run> {
    let side = qo.side();
    let (y, iterations) =
        automaton_lfp(n1, side, qo.empty_key(), |k, a| qo.extend(k, a), |x, y| qo.leq(x, y), limits, |_| {})?;
    let witness = checked_components(n1, side)
        .ones()
        .flat_map(|q| y[q].tags())
        .find(|w| !member(w))
        .cloned();
    let verdict = match witness {
        Some(w) => Verdict::not_included(Some(w)),
        None => Verdict::included(),
    };
    Ok(Run { verdict, iterations, fixpoint: words_of(&y) })
}

/// Direction of the state-set antichain algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntichainVariant {
    /// Keys `pre_w(F2)` ordered by `⊆`; a key fails when it misses `I2`.
    Forward,
    /// Keys `cpre_w(F2ᶜ)` ordered by `⊇`; a key fails when it contains `I2`.
    Backward,
}

fn complement(s: &StateSet) -> StateSet {
    let mut c = s.clone();
    c.toggle_range(..);
    c
}

/// State-set antichain inclusion check `L(n1) ⊆ L(n2)`.
pub fn fa_inc_antichain(n1: &Nfa, n2: &Nfa, variant: AntichainVariant, limits: &Limits) -> Result<Run> {
    fa_inc_antichain_observed(n1, n2, variant, limits, |_| {})
}

/// Same as [`fa_inc_antichain`], also handing every iterate (as key vectors) to `observe`.
pub fn fa_inc_antichain_observed(
    n1: &Nfa,
    n2: &Nfa,
    variant: AntichainVariant,
    limits: &Limits,
    mut observe: impl FnMut(&[Antichain<StateSet, Word>]),
) -> Result<Run> {
    let i2 = n2.initial();
    let (y, iterations, fails): (Vector<StateSet>, usize, Box<dyn Fn(&StateSet) -> bool>) = match variant {
        AntichainVariant::Forward => {
            let (y, it) = automaton_lfp(
                n1,
                Side::Left,
                n2.finals().clone(),
                |s, a| n2.pre(s, a),
                |x, y| x.is_subset(y),
                limits,
                |v| observe(v),
            )?;
            (y, it, Box::new(move |s: &StateSet| s.is_disjoint(i2)))
        }
        AntichainVariant::Backward => {
            let (y, it) = automaton_lfp(
                n1,
                Side::Left,
                complement(n2.finals()),
                |s, a| complement(&n2.pre(&complement(s), a)),
                |x, y| y.is_subset(x),
                limits,
                |v| observe(v),
            )?;
            (y, it, Box::new(move |s: &StateSet| i2.is_subset(s)))
        }
    };
    let failing = checked_components(n1, Side::Left)
        .ones()
        .flat_map(|q| y[q].iter())
        .filter(|(k, _)| fails(k))
        .map(|(_, w)| w);
    let verdict = match least_word(failing) {
        Some(w) => Verdict::not_included(Some(w)),
        None => Verdict::included(),
    };
    Ok(Run { verdict, iterations, fixpoint: words_of(&y) })
}

/// Greatest-fixpoint check `L(n1) ⊆ L(l2)` with each component held as a
/// canonical DFA. No witness is produced.
pub fn fa_inc_gfp(n1: &Nfa, l2: &Dfa, limits: &Limits) -> Result<Run> {
    let sigma: Vec<u8> = {
        let mut s: BTreeSet<u8> = n1.alphabet().clone();
        s.extend(l2.symbols().iter().copied());
        s.into_iter().collect()
    };
    let universal = {
        let mut f = StateSet::with_capacity(1);
        f.insert(0);
        Dfa::from_table(sigma.clone(), 0, f, vec![vec![Some(0); sigma.len()]]).canonical_form()
    };
    let l2c = l2.complete(&sigma).canonical_form();
    let n = n1.state_count();
    let step = |x: &Vec<Dfa>| -> Vec<Dfa> {
        (0..n)
            .map(|q2| {
                let mut acc = if n1.is_initial(q2) { l2c.clone() } else { universal.clone() };
                for &(a, q) in n1.predecessors(q2) {
                    let quotient = x[q].from_state(x[q].delta(x[q].initial_state(), a).unwrap());
                    acc = acc.product(&quotient, |p, r| p && r).canonical_form();
                }
                acc
            })
            .collect()
    };
    let fp = kleene(step, vec![universal.clone(); n], |a, b| a == b, limits)?;
    let included = n1.finals().ones().all(|q| {
        let d = &fp.value[q];
        d.is_final(d.initial_state())
    });
    let verdict = if included { Verdict::included() } else { Verdict::not_included(None) };
    Ok(Run { verdict, iterations: fp.iterations, fixpoint: Vec::new() })
}

/// Kleene iteration over vectors of word antichains indexed by grammar
/// variables, for a two-sided quasiorder. An axiom ε-rule derives only the
/// empty word itself, so it stays out of the iteration and callers test it apart.
fn grammar_lfp<O: ContextOrder>(
    g: &CnfGrammar,
    qo: &O,
    limits: &Limits,
) -> Result<(Vector<O::Key>, usize)> {
    let v = g.variable_count();
    let leq = |x: &O::Key, y: &O::Key| qo.leq(x, y);
    let step = |y: &Vector<O::Key>| -> Vector<O::Key> {
        (0..v)
            .map(|i| {
                let mut ac = y[i].clone();
                for &a in g.terminal_rules(i) {
                    ac.insert(qo.letter_key(a), vec![a], leq);
                }
                for &(j, k) in g.binary_rules(i) {
                    for (k1, w1) in y[j].iter() {
                        for (k2, w2) in y[k].iter() {
                            let mut w = w1.clone();
                            w.extend_from_slice(w2);
                            ac.insert(qo.concat(k1, k2), w, leq);
                        }
                    }
                }
                ac
            })
            .collect()
    };
    let fp = kleene(step, vec![Antichain::new(); v], |a, b| vectors_equivalent(a, b, leq), limits)?;
    Ok((fp.value, fp.iterations))
}

/// Word-based check `L(g) ⊆ L2` for a two-sided quasiorder consistent with `L2`.
pub fn cfg_inc_word<O: ContextOrder>(
    g: &CnfGrammar,
    qo: &O,
    member: impl Fn(&[u8]) -> bool,
    limits: &Limits,
) -> Result<Run> {
    let (y, iterations) = grammar_lfp(g, qo, limits)?;
    let eps_fails = g.has_epsilon() && !member(&[]);
    let verdict = match y[0].tags().find(|w| !member(w)) {
        _ if eps_fails => Verdict::not_included(Some(Vec::new())),
        Some(w) => Verdict::not_included(Some(w.clone())),
        None => Verdict::included(),
    };
    Ok(Run { verdict, iterations, fixpoint: words_of(&y) })
}

/// Antichain check `L(g) ⊆ L(n)` over state-pair relations.
pub fn cfg_inc_antichain(g: &CnfGrammar, n: &Nfa, limits: &Limits) -> Result<Run> {
    let qo = CtxOrder::new(n);
    let (y, iterations) = grammar_lfp(g, &qo, limits)?;
    let eps = Vec::new();
    let eps_fails = g.has_epsilon() && !qo.accepting(&qo.empty_key());
    let failing = y[0].iter().filter(|(k, _)| !qo.accepting(k)).map(|(_, w)| w);
    let verdict = match least_word(failing.chain(eps_fails.then_some(&eps))) {
        Some(w) => Verdict::not_included(Some(w)),
        None => Verdict::included(),
    };
    Ok(Run { verdict, iterations, fixpoint: words_of(&y) })
}

/// The pair-set keys of a finished [`cfg_inc_antichain`] run, recomputed from its words.
pub fn ctx_keys_of(n: &Nfa, words: &[Word]) -> Vec<PairSet> {
    let qo = CtxOrder::new(n);
    words.iter().map(|w| qo.key_of(w)).collect()
}

/// `L(n) ⊆ T(start)`: every word of `n` is a trace of the OCN from `start`.
pub fn nfa_in_ocn(n: &Nfa, o: &Ocn, start: (usize, u64), limits: &Limits) -> Result<Run> {
    let qo = MacroOrder::new(o, start);
    let is_trace = |w: &[u8]| qo.key_of(w).iter().any(Option::is_some);
    fa_inc_word(n, &qo, is_trace, limits)
}

/// Selector for the NFA-versus-NFA algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Word-based, left Nerode quasiorder of `L(n2)`.
    WordNerode,
    /// Word-based, left state-set quasiorder of `n2`.
    WordState,
    /// Word-based, left simulation quasiorder of `n2`.
    WordSim,
    AntichainForward,
    AntichainBackward,
    Gfp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::WordNerode,
        Algorithm::WordState,
        Algorithm::WordSim,
        Algorithm::AntichainForward,
        Algorithm::AntichainBackward,
        Algorithm::Gfp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::WordNerode => "word-nerode",
            Algorithm::WordState => "word-state",
            Algorithm::WordSim => "word-sim",
            Algorithm::AntichainForward => "antichain-fwd",
            Algorithm::AntichainBackward => "antichain-bwd",
            Algorithm::Gfp => "gfp",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == s)
    }
}

/// Runs one of the NFA inclusion algorithms on `L(n1) ⊆ L(n2)`.
pub fn decide_nfa(n1: &Nfa, n2: &Nfa, algo: Algorithm, limits: &Limits) -> Result<Run> {
    let member = |w: &[u8]| n2.accepts(w);
    let extra: Vec<u8> = n1.alphabet().iter().copied().collect();
    match algo {
        Algorithm::WordNerode => fa_inc_word(n1, &NerodeOrder::new(n2, Side::Left, &extra), member, limits),
        Algorithm::WordState => fa_inc_word(n1, &StateOrder::new(n2, Side::Left), member, limits),
        Algorithm::WordSim => fa_inc_word(n1, &SimulationOrder::new(n2, Side::Left), member, limits),
        Algorithm::AntichainForward => fa_inc_antichain(n1, n2, AntichainVariant::Forward, limits),
        Algorithm::AntichainBackward => fa_inc_antichain(n1, n2, AntichainVariant::Backward, limits),
        Algorithm::Gfp => fa_inc_gfp(n1, &n2.determinize(), limits),
    }
}
