use super::*;
use crate::fixtures::{self, random_nfa, words_up_to};
use proptest::prelude::*;
use rand::{rngs::StdRng, SeedableRng};

fn set(width: usize, xs: &[usize]) -> StateSet {
    state_set(width, xs.iter().copied())
}

/// Membership by explicit path enumeration, independent of the subset-based `run`.
fn accepts_by_paths(n: &Nfa, w: &[u8]) -> bool {
    fn go(n: &Nfa, p: usize, w: &[u8]) -> bool {
        match w.split_first() {
            None => n.is_final(p),
            Some((&a, rest)) => n.successors(p).iter().any(|&(b, q)| b == a && go(n, q, rest)),
        }
    }
    n.initial().ones().any(|p| go(n, p, w))
}

#[test]
fn step_follows_the_transition_table() {
    let n = fixtures::a_or_bplus_a_star();
    assert_eq!(n.step(&set(2, &[0]), b'b', Direction::Forward), set(2, &[1]));
    assert_eq!(n.step(&set(2, &[]), b'a', Direction::Forward), set(2, &[]));
    assert_eq!(n.step(&set(2, &[0]), b'z', Direction::Forward), set(2, &[]));
}

#[test]
fn backward_run_on_the_right_pair_automaton() {
    let n = fixtures::pair_right();
    assert_eq!(n.run(b"ab", Direction::Backward), set(5, &[0]));
    assert_eq!(n.run(b"ac", Direction::Backward), set(5, &[0, 1]));
    assert_eq!(n.run(b"", Direction::Forward), set(5, &[0]));
    assert!(!n.accepts(b"c"));
    assert!(!n.accepts(b"a") && !n.accepts(b"b"));
    for w in ["ab", "bb", "ac", "aac", "aaba"] {
        assert!(n.accepts(w.as_bytes()), "{w}");
    }
}

#[test]
fn epsilon_membership_with_overlapping_initial_and_final() {
    let n = Nfa::from_parts(1, &[0], &[0], &[]);
    assert!(n.accepts(b""));
}

#[test]
fn reverse_is_an_involution_and_mirrors_the_language() {
    let n = fixtures::a_gap_a();
    assert_eq!(n.reverse().reverse(), n);
    for w in words_up_to(b"ab", 6) {
        let mut r = w.clone();
        r.reverse();
        assert_eq!(n.reverse().accepts(&r), n.accepts(&w));
    }
    let lp = Nfa::from_parts(1, &[0], &[0], &[(0, b'a', 0)]);
    assert_eq!(lp.reverse(), lp);
}

#[test]
fn subset_construction_of_the_a_gap_a_automaton() {
    let d = fixtures::a_gap_a().determinize();
    assert_eq!(d.state_count(), 8);
    let subsets: Vec<Vec<usize>> = (0..8).map(|q| d.subset(q).unwrap().ones().collect()).collect();
    for expected in [vec![0], vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![0, 1, 3], vec![0, 1, 2, 3], vec![0, 2, 3], vec![0, 3]] {
        assert!(subsets.contains(&expected), "{expected:?}");
    }
    let m = d.minimize();
    assert_eq!(m.state_count(), 5);
    // The four accepting subsets share one right language.
    let finals: Vec<usize> = (0..8).filter(|&q| d.is_final(q)).collect();
    assert_eq!(finals.len(), 4);
    for &p in &finals {
        for &q in &finals {
            assert!(d.from_state(p).equivalent(&d.from_state(q)));
        }
    }
}

#[test]
fn deterministic_input_keeps_its_shape() {
    let n = fixtures::context_dfa();
    let d = n.determinize();
    assert_eq!(d.state_count(), 3);
    assert_eq!(d.minimize().state_count(), 3);
    assert_eq!(Dfa::from_nfa(&n).unwrap().minimize().state_count(), 3);
}

#[test]
fn empty_language_minimizes_to_one_state() {
    let n = Nfa::from_parts(2, &[0], &[], &[(0, b'a', 1)]);
    let m = n.determinize().minimize();
    assert_eq!(m.state_count(), 1);
    assert!(m.is_empty_language());
}

#[test]
fn naive_inclusion_on_the_reference_pair() {
    let v = naive_inclusion(&fixtures::pair_left(), &fixtures::pair_right());
    // `a`, `b` and `c` are all length-one counterexamples; BFS reports the least.
    assert_eq!(v, Verdict::not_included(Some(b"a".to_vec())));
    let empty = Nfa::from_parts(1, &[0], &[], &[]);
    assert!(naive_inclusion(&empty, &fixtures::pair_right()).included);
    let r = fixtures::pair_right();
    assert!(naive_inclusion(&r, &r).included);
}

#[test]
fn equivalence_counterexample_examples() {
    let ab_bb = Nfa::from_parts(3, &[0], &[2], &[(0, b'a', 1), (0, b'b', 1), (1, b'b', 2)]);
    let ab = Nfa::from_parts(3, &[0], &[2], &[(0, b'a', 1), (1, b'b', 2)]);
    assert_eq!(equivalence_counterexample(&ab_bb, &ab), Some(b"bb".to_vec()));
    assert_eq!(equivalence_counterexample(&ab, &ab), None);
}

#[test]
fn cfg_oracle_on_the_reference_grammar() {
    let g = fixtures::a_star_b_a_star();
    let d = Dfa::from_nfa(&fixtures::context_dfa()).unwrap();
    let v = cfg_in_regular_oracle(&g, &d);
    assert!(!v.included);
    let w = v.witness.unwrap();
    assert!(g.generates(&w) && !d.accepts(&w));
    let all = Nfa::from_parts(1, &[0], &[0], &[(0, b'a', 0), (0, b'b', 0)]);
    assert!(cfg_in_regular_oracle(&g, &Dfa::from_nfa(&all).unwrap()).included);
}

#[test]
fn cfg_oracle_agrees_with_enumeration_on_random_instances() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let g = random_grammar(&mut rng);
        let n = random_nfa(&mut rng, 3, 2, 0.4);
        let d = n.determinize();
        let v = cfg_in_regular_oracle(&g, &d);
        let words = g.words_up_to(6);
        let bad = words.iter().find(|w| !d.accepts(w));
        if let Some(w) = &v.witness {
            assert!(g.generates(w) && !d.accepts(w));
        }
        if bad.is_some() {
            assert!(!v.included);
        }
    }
}

fn random_grammar(rng: &mut StdRng) -> CnfGrammar {
    use rand::Rng;
    let v = rng.gen_range(1..=3);
    let mut terms = Vec::new();
    let mut bins = Vec::new();
    for x in 0..v {
        terms.push((x, b'a' + rng.gen_range(0..2)));
        for _ in 0..rng.gen_range(0..3) {
            bins.push((x, rng.gen_range(0..v), rng.gen_range(0..v)));
        }
    }
    CnfGrammar::new(v, &terms, &bins, rng.gen_bool(0.2)).unwrap()
}

#[test]
fn random_step_matches_per_state_union() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..50 {
        let n = random_nfa(&mut rng, 4, 2, 0.3);
        for mask in 0u32..16 {
            let s = state_set(4, (0..4).filter(|i| mask >> i & 1 == 1));
            for a in [b'a', b'b'] {
                let mut expect = StateSet::with_capacity(4);
                for (p, b, q) in n.transitions() {
                    if b == a && s.contains(p) {
                        expect.insert(q);
                    }
                }
                assert_eq!(n.post(&s, a), expect);
            }
        }
    }
}

fn arb_nfa() -> impl Strategy<Value = Nfa> {
    (any::<u64>(), 1usize..=5).prop_map(|(seed, k)| random_nfa(&mut StdRng::seed_from_u64(seed), k, 2, 0.3))
}

fn arb_word() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b')], 0..=4)
}

proptest! {
    #[test]
    fn membership_agrees_across_constructions(n in arb_nfa(), w in proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b')], 0..=5)) {
        let expect = accepts_by_paths(&n, &w);
        prop_assert_eq!(n.accepts(&w), expect);
        prop_assert_eq!(n.determinize().accepts(&w), expect);
        prop_assert_eq!(n.reverse().reverse().accepts(&w), expect);
        prop_assert_eq!(n.determinize().minimize().accepts(&w), expect);
    }

    #[test]
    fn run_composes(n in arb_nfa(), u in arb_word(), v in arb_word()) {
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        prop_assert_eq!(n.run(&uv, Direction::Forward), n.post_word(&n.run(&u, Direction::Forward), &v));
        prop_assert_eq!(n.run(&uv, Direction::Backward), n.pre_word(&n.run(&v, Direction::Backward), &u));
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_language(n in arb_nfa()) {
        let m = n.determinize().minimize();
        prop_assert_eq!(m.minimize().state_count(), m.state_count());
        prop_assert_eq!(equivalence_counterexample(&m.to_nfa(), &n), None);
    }

    #[test]
    fn naive_inclusion_witnesses_verify(a in arb_nfa(), b in arb_nfa()) {
        let v = naive_inclusion(&a, &b);
        match &v.witness {
            Some(w) => prop_assert!(a.accepts(w) && !b.accepts(w)),
            None => prop_assert!(v.included),
        }
        let brute = words_up_to(b"ab", 6).into_iter().any(|w| a.accepts(&w) && !b.accepts(&w));
        if brute {
            prop_assert!(!v.included);
        }
    }

    #[test]
    fn counterexample_separates(a in arb_nfa(), b in arb_nfa()) {
        match equivalence_counterexample(&a, &b) {
            Some(w) => prop_assert_ne!(a.accepts(&w), b.accepts(&w)),
            None => prop_assert!(a.determinize().equivalent(&b.determinize())),
        }
    }
}
