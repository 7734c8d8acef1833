//! Residual automata built from quasiorders on words.
//!
//! Every construction here is a right-handed one. Left-handed variants are
//! obtained by reversing the input, building on the right, and reversing the
//! result back.

use std::borrow::Cow;
use std::collections::{HashMap, HashSet, VecDeque};

use crate::automata::{naive_inclusion, state_set, Nfa, StateSet, Word};
use crate::quasiorder::{ResidualIndex, Side};

mod learner;

pub use learner::{nl_learn, nl_learn_observed, Learned, Observations};

/// Principals of a quasiorder, one per distinct key, with the shortest
/// (then lexicographically least) word reaching each key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalSet<K = StateSet> {
    pub keys: Vec<K>,
    pub words: Vec<Word>,
    pub prime: Vec<bool>,
}

impl<K> PrincipalSet<K> {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn prime_count(&self) -> usize {
        self.prime.iter().filter(|&&p| p).count()
    }
}

fn oriented(n: &Nfa, side: Side) -> Cow<'_, Nfa> {
    match side {
        Side::Right => Cow::Borrowed(n),
        Side::Left => Cow::Owned(n.reverse()),
    }
}

/// Breadth-first enumeration of the reachable `post_u(I)` sets.
fn reachable_sets(n: &Nfa) -> (Vec<StateSet>, Vec<Word>) {
    let mut index: HashMap<StateSet, usize> = HashMap::new();
    let mut keys = vec![n.initial().clone()];
    let mut words = vec![Vec::new()];
    index.insert(keys[0].clone(), 0);
    let mut i = 0;
    while i < keys.len() {
        for &a in n.alphabet() {
            let t = n.post(&keys[i], a);
            if !index.contains_key(&t) {
                index.insert(t.clone(), keys.len());
                let mut w = words[i].clone();
                w.push(a);
                keys.push(t);
                words.push(w);
            }
        }
        i += 1;
    }
    (keys, words)
}

fn strictly_below<'a>(key: &'a StateSet, keys: &'a [StateSet]) -> impl Iterator<Item = &'a StateSet> + 'a {
    keys.iter().filter(move |k| k.is_subset(key) && *k != key)
}

/// Principals of the state-based quasiorder `≤_N`: keys are `post_u(I)`
/// (right) or `pre_u(F)` (left), and the prime flags follow [`is_composite`].
pub fn principals(n: &Nfa, side: Side) -> PrincipalSet {
    let m = oriented(n, side);
    let (keys, mut words) = reachable_sets(&m);
    if side == Side::Left {
        words.iter_mut().for_each(|w| w.reverse());
    }
    let prime = keys.iter().map(|k| !composite_among(&m, k, &keys)).collect();
    PrincipalSet { keys, words, prime }
}

fn composite_among(m: &Nfa, key: &StateSet, keys: &[StateSet]) -> bool {
    let mut below = m.empty_set();
    for k in strictly_below(key, keys) {
        below.union_with(k);
    }
    let own = m.with_initial(key.clone());
    let union = m.with_initial(below);
    naive_inclusion(&own, &union).included && naive_inclusion(&union, &own).included
}

/// Whether the principal with `key` equals, as a quotient of `L(n)`, the
/// union of the quotients of the principals strictly below it.
pub fn is_composite(n: &Nfa, key: &StateSet, ps: &PrincipalSet, side: Side) -> bool {
    composite_among(&oriented(n, side), key, &ps.keys)
}

/// The automaton whose states are the prime principals of `ps`.
///
/// `key_of` maps a word to its key, `leq` compares keys, and `member` decides
/// membership in the target language. A state `ρ(u)` is initial when
/// `key(u) ≤ key(ε)`, final when `u` is a member, and has an `a`-edge to
/// `ρ(v)` whenever `key(v) ≤ key(ua)`.
pub fn build_h<K>(
    ps: &PrincipalSet<K>,
    leq: impl Fn(&K, &K) -> bool,
    key_of: impl Fn(&[u8]) -> K,
    member: impl Fn(&[u8]) -> bool,
    alphabet: &[u8],
) -> Nfa {
    let states: Vec<usize> = (0..ps.len()).filter(|&i| ps.prime[i]).collect();
    let mut out = Nfa::new(states.len());
    alphabet.iter().for_each(|&a| out.add_symbol(a));
    let eps = key_of(&[]);
    for (s, &i) in states.iter().enumerate() {
        let u = &ps.words[i];
        if leq(&ps.keys[i], &eps) {
            out.set_initial(s);
        }
        if member(u) {
            out.set_final(s);
        }
        let mut ua = u.clone();
        for &a in alphabet {
            ua.push(a);
            let k = key_of(&ua);
            for (t, &j) in states.iter().enumerate() {
                if leq(&ps.keys[j], &k) {
                    out.add_transition(s, a, t);
                }
            }
            ua.pop();
        }
    }
    out
}

fn alphabet_of(n: &Nfa) -> Vec<u8> {
    n.alphabet().iter().copied().collect()
}

/// `Res(N)`: the construction over the prime principals of `≤_N`. The left
/// version is the reverse of the right one applied to the reversed automaton.
pub fn res(n: &Nfa, side: Side) -> Nfa {
    if side == Side::Left {
        return res(&n.reverse(), Side::Right).reverse();
    }
    let ps = principals(n, Side::Right);
    build_h(
        &ps,
        |x, y| x.is_subset(y),
        |w| n.post_word(n.initial(), w),
        |w| n.accepts(w),
        &alphabet_of(n),
    )
}

/// Residual states of `idx` whose quotient is the union of the quotients strictly inside it.
pub fn composite_residuals(idx: &ResidualIndex) -> Vec<bool> {
    let d = idx.dfa().to_nfa();
    let k = idx.state_count();
    (0..k)
        .map(|i| {
            let below = state_set(k, (0..k).filter(|&j| idx.includes(j, i) && !idx.includes(i, j)));
            naive_inclusion(&d.with_initial(state_set(k, [i])), &d.with_initial(below)).included
        })
        .collect()
}

/// The canonical RFA of `L(lang)`: prime residuals with saturated transitions.
/// On the left this is the reverse of the canonical RFA of the reversed language.
pub fn canonical(lang: &Nfa, side: Side) -> Nfa {
    if side == Side::Left {
        return canonical(&lang.reverse(), Side::Right).reverse();
    }
    let idx = ResidualIndex::new(lang, &[]);
    let d = idx.dfa();
    let (_, words) = reachable_sets(&d.to_nfa());
    let composite = composite_residuals(&idx);
    let order: Vec<usize> = words.iter().map(|w| idx.state_of(w).unwrap()).collect();
    let ps = PrincipalSet {
        prime: order.iter().map(|&p| !composite[p]).collect(),
        keys: order,
        words,
    };
    build_h(
        &ps,
        |&p, &q| idx.includes(p, q),
        |w| idx.state_of(w).unwrap(),
        |w| d.accepts(w),
        &alphabet_of(lang),
    )
}

/// Residualization by non-coverable subsets: reachable `post_u(I)` sets that
/// are not the union of the reachable sets strictly inside them, with
/// saturated transitions and initial states.
pub fn denis_residualize(n: &Nfa) -> Nfa {
    let (keys, _) = reachable_sets(n);
    let kept: Vec<&StateSet> = keys
        .iter()
        .filter(|k| {
            let mut cover = n.empty_set();
            strictly_below(k, &keys).for_each(|s| cover.union_with(s));
            cover != **k
        })
        .collect();
    let mut out = Nfa::new(kept.len());
    n.alphabet().iter().for_each(|&a| out.add_symbol(a));
    for (s, k) in kept.iter().enumerate() {
        if k.is_subset(n.initial()) {
            out.set_initial(s);
        }
        if !k.is_disjoint(n.finals()) {
            out.set_final(s);
        }
        for &a in n.alphabet() {
            let post = n.post(k, a);
            for (t, k2) in kept.iter().enumerate() {
                if k2.is_subset(&post) {
                    out.add_transition(s, a, t);
                }
            }
        }
    }
    out
}

/// `Res(Res(N^R)^R)`, the residual counterpart of double-reversal minimisation.
pub fn double_reversal_canonical(n: &Nfa) -> Nfa {
    res(&res(&n.reverse(), Side::Right).reverse(), Side::Right)
}

/// Whether every left language `W_{I,q}` is upward closed for the right
/// Nerode quasiorder of `L(n)`, the condition under which `res(n)` is canonical.
pub fn check_dr_condition(n: &Nfa) -> bool {
    let idx = ResidualIndex::new(n, &[]);
    let d = idx.dfa();
    let k = idx.state_count();
    let mut reached: Vec<StateSet> = vec![StateSet::with_capacity(k); n.state_count()];
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for q in n.initial().ones() {
        if !reached[q].put(d.initial_state()) {
            queue.push_back((q, d.initial_state()));
        }
    }
    while let Some((q, p)) = queue.pop_front() {
        for &(a, r) in n.successors(q) {
            let p2 = d.delta(p, a).expect("residual DFA is complete over the alphabet");
            if !reached[r].put(p2) {
                queue.push_back((r, p2));
            }
        }
    }
    let dn = d.to_nfa();
    (0..n.state_count()).all(|q| {
        let up = state_set(k, (0..k).filter(|&p2| reached[q].ones().any(|p| idx.includes(p, p2))));
        naive_inclusion(&dn.with_finals(up), &n.with_finals(state_set(n.state_count(), [q]))).included
    })
}

/// How the right language of a set of states relates to one residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Relation {
    inside: bool,
    contains: bool,
}

fn relate(n: &Nfa, start: &StateSet, idx: &ResidualIndex, p: usize) -> Relation {
    let d = idx.dfa();
    let mut symbols: Vec<u8> = alphabet_of(n);
    symbols.extend(d.symbols());
    symbols.sort_unstable();
    symbols.dedup();
    let mut rel = Relation { inside: true, contains: true };
    let mut seen: HashSet<(StateSet, Option<usize>)> = HashSet::new();
    let mut queue = VecDeque::from([(start.clone(), Some(p))]);
    seen.insert((start.clone(), Some(p)));
    while let Some((s, p)) = queue.pop_front() {
        let here = !s.is_disjoint(n.finals());
        let there = p.is_some_and(|p| d.is_final(p));
        rel.inside &= !here || there;
        rel.contains &= here || !there;
        if !rel.inside && !rel.contains {
            break;
        }
        for &a in &symbols {
            let next = (n.post(&s, a), idx.step(p, a));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    rel
}

/// Residual of `L(n)` equal to the right language of `q`, if there is one.
fn residual_label(n: &Nfa, q: usize, idx: &ResidualIndex) -> Option<usize> {
    let s = state_set(n.state_count(), [q]);
    (0..idx.state_count()).find(|&p| {
        let r = relate(n, &s, idx, p);
        r.inside && r.contains
    })
}

/// Whether the right language of every state is a residual of `L(n)`.
pub fn is_rfa(n: &Nfa) -> bool {
    let idx = ResidualIndex::new(n, &[]);
    (0..n.state_count()).all(|q| residual_label(n, q, &idx).is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Signature {
    label: Option<usize>,
    below: Vec<bool>,
    initial: bool,
    last: bool,
}

fn signatures(n: &Nfa, idx: &ResidualIndex) -> Vec<Signature> {
    (0..n.state_count())
        .map(|q| {
            let s = state_set(n.state_count(), [q]);
            let rels: Vec<Relation> = (0..idx.state_count()).map(|p| relate(n, &s, idx, p)).collect();
            Signature {
                label: rels.iter().position(|r| r.inside && r.contains),
                below: rels.iter().map(|r| r.contains).collect(),
                initial: n.is_initial(q),
                last: n.is_final(q),
            }
        })
        .collect()
}

/// Automaton isomorphism for automata of the same language. States are
/// matched through the residuals their right languages equal or contain,
/// with backtracking among states that share that labelling.
pub fn isomorphic(a: &Nfa, b: &Nfa) -> bool {
    if a.state_count() != b.state_count()
        || a.transition_count() != b.transition_count()
        || crate::automata::equivalence_counterexample(a, b).is_some()
    {
        return false;
    }
    let mut sigma: Vec<u8> = alphabet_of(a);
    sigma.extend(b.alphabet());
    sigma.sort_unstable();
    sigma.dedup();
    let idx = ResidualIndex::new(a, &sigma);
    let (sa, sb) = (signatures(a, &idx), signatures(b, &idx));
    let edges: HashSet<(usize, u8, usize)> = b.transitions().collect();
    let mut map = vec![usize::MAX; a.state_count()];
    let mut used = vec![false; b.state_count()];
    extend_iso(0, a, &sa, &sb, &edges, &mut map, &mut used)
}

fn extend_iso(
    q: usize,
    a: &Nfa,
    sa: &[Signature],
    sb: &[Signature],
    edges: &HashSet<(usize, u8, usize)>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if q == a.state_count() {
        return true;
    }
    for cand in 0..sb.len() {
        if used[cand] || sb[cand] != sa[q] {
            continue;
        }
        map[q] = cand;
        let consistent = a.successors(q).iter().all(|&(c, r)| map[r] == usize::MAX || edges.contains(&(cand, c, map[r])))
            && a.predecessors(q).iter().all(|&(c, p)| map[p] == usize::MAX || edges.contains(&(map[p], c, cand)));
        if consistent {
            used[cand] = true;
            if extend_iso(q + 1, a, sa, sb, edges, map, used) {
                return true;
            }
            used[cand] = false;
        }
        map[q] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests;
