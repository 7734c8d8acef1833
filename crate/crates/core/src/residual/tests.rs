use super::*;
use crate::automata::equivalence_counterexample;
use crate::fixtures::{self, random_nfa, words_up_to};
use crate::quasiorder::ResidualIndex;
use crate::Limits;
use rand::{rngs::StdRng, SeedableRng};

fn set(width: usize, xs: &[usize]) -> StateSet {
    state_set(width, xs.iter().copied())
}

fn same_language(a: &Nfa, b: &Nfa) -> bool {
    equivalence_counterexample(a, b).is_none()
}

fn random_inputs(seed: u64, count: usize) -> Vec<Nfa> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| random_nfa(&mut rng, 4, 2, 0.3)).collect()
}

fn learn(target: &Nfa) -> Learned {
    let alphabet: Vec<u8> = target.alphabet().iter().copied().collect();
    nl_learn(
        &alphabet,
        |w| target.accepts(w),
        |h| equivalence_counterexample(h, target),
        &Limits::default(),
    )
    .unwrap()
}

#[test]
fn seven_words_principals() {
    let n = fixtures::seven_words();
    let ps = principals(&n, Side::Right);
    let expected = [
        set(6, &[0]),
        set(6, &[1, 2]),
        set(6, &[1, 3]),
        set(6, &[1, 2, 3, 4]),
        set(6, &[5]),
        set(6, &[]),
    ];
    assert_eq!(ps.keys, expected);
    let words: Vec<&[u8]> = ps.words.iter().map(Vec::as_slice).collect();
    assert_eq!(&words[..5], &[&b""[..], b"a", b"b", b"c", b"aa"]);
    assert_eq!(ps.prime, [true, true, true, false, true, false]);
}

#[test]
fn composite_principal_of_c_and_the_empty_key() {
    let n = fixtures::seven_words();
    let ps = principals(&n, Side::Right);
    assert!(is_composite(&n, &set(6, &[1, 2, 3, 4]), &ps, Side::Right));
    assert!(is_composite(&n, &set(6, &[]), &ps, Side::Right));
    for k in [&[0][..], &[1, 2], &[1, 3]] {
        assert!(!is_composite(&n, &set(6, k), &ps, Side::Right));
    }
}

#[test]
fn seven_words_residualizations() {
    let n = fixtures::seven_words();
    let r = res(&n, Side::Right);
    let d = denis_residualize(&n);
    assert_eq!(r.state_count(), 4);
    assert_eq!(d.state_count(), 5);
    assert!(same_language(&r, &n) && same_language(&d, &n));
    assert!(is_rfa(&r) && is_rfa(&d));
    assert!(!is_rfa(&n));
    // The residual construction is already canonical here while the subset one is not.
    let can = canonical(&n, Side::Right);
    assert!(isomorphic(&r, &can));
    assert!(!isomorphic(&d, &can));
    assert!(check_dr_condition(&n));
    assert!(isomorphic(&can, &res(&res(&n, Side::Left), Side::Right)));
}

#[test]
fn single_loop_has_one_nonempty_principal() {
    let n = Nfa::from_parts(1, &[0], &[0], &[(0, b'a', 0)]);
    let ps = principals(&n, Side::Right);
    assert_eq!(ps.len(), 1);
    assert!(ps.keys[0].contains(0));
    assert_eq!(res(&n, Side::Right).state_count(), 1);
}

#[test]
fn principal_count_matches_determinization() {
    for n in random_inputs(11, 60) {
        assert_eq!(principals(&n, Side::Right).len(), n.determinize().state_count());
        assert_eq!(principals(&n, Side::Left).len(), n.reverse().determinize().state_count());
    }
}

#[test]
fn composite_agrees_with_bounded_quotients() {
    let suffixes = words_up_to(b"ab", 6);
    for n in random_inputs(12, 60) {
        let ps = principals(&n, Side::Right);
        for (i, key) in ps.keys.iter().enumerate() {
            let own: Vec<bool> = suffixes.iter().map(|x| !n.post_word(key, x).is_disjoint(n.finals())).collect();
            let mut union = vec![false; suffixes.len()];
            for k in ps.keys.iter().filter(|k| k.is_subset(key) && *k != key) {
                for (j, x) in suffixes.iter().enumerate() {
                    union[j] |= !n.post_word(k, x).is_disjoint(n.finals());
                }
            }
            assert_eq!(!ps.prime[i], own == union, "principal {:?}", ps.words[i]);
        }
    }
}

#[test]
fn constructions_preserve_the_language() {
    for n in random_inputs(13, 80) {
        for side in [Side::Right, Side::Left] {
            assert!(same_language(&res(&n, side), &n));
            assert!(same_language(&canonical(&n, side), &n));
        }
        assert!(same_language(&denis_residualize(&n), &n));
        assert!(same_language(&double_reversal_canonical(&n), &n));
    }
}

#[test]
fn outputs_are_residual() {
    for n in random_inputs(14, 60) {
        assert!(is_rfa(&res(&n, Side::Right)));
        assert!(is_rfa(&canonical(&n, Side::Right)));
        assert!(is_rfa(&denis_residualize(&n)));
        assert!(is_rfa(&n.determinize().to_nfa()));
    }
}

#[test]
fn size_ordering() {
    for n in random_inputs(15, 80) {
        let c = canonical(&n, Side::Right).state_count();
        let r = res(&n, Side::Right).state_count();
        let d = denis_residualize(&n).state_count();
        assert!(c <= r && r <= d, "{c} {r} {d}");
    }
}

#[test]
fn left_construction_is_the_mirrored_right_one() {
    for n in random_inputs(16, 40) {
        assert_eq!(res(&n, Side::Left), res(&n.reverse(), Side::Right).reverse());
        assert!(isomorphic(&canonical(&n, Side::Left), &canonical(&n.reverse(), Side::Right).reverse()));
    }
}

#[test]
fn double_reversal_yields_the_canonical_rfa() {
    for n in random_inputs(17, 80) {
        let can = canonical(&n, Side::Right);
        assert!(isomorphic(&double_reversal_canonical(&n), &can));
        assert!(isomorphic(&double_reversal_canonical(&can), &can));
        assert!(isomorphic(&res(&can, Side::Right), &can));
    }
}

#[test]
fn empty_language() {
    let n = Nfa::from_parts(2, &[0], &[], &[(0, b'a', 1)]);
    let can = canonical(&n, Side::Right);
    assert_eq!(can.state_count(), 0);
    assert!(isomorphic(&double_reversal_canonical(&n), &can));
    assert!(check_dr_condition(&can));
}

#[test]
fn all_prime_residuals_give_the_saturated_minimal_dfa() {
    let n = fixtures::context_dfa();
    let can = canonical(&n, Side::Right);
    assert_eq!(can.state_count(), n.determinize().minimize().state_count());
    assert!(is_rfa(&can));
}

/// Whether `post_u(I) ⊆ post_v(I)` coincides with `u⁻¹L ⊆ v⁻¹L` on all words.
fn state_order_is_nerode(n: &Nfa) -> bool {
    let ps = principals(n, Side::Right);
    let idx = ResidualIndex::new(n, &[]);
    let res_of: Vec<usize> = ps.words.iter().map(|w| idx.state_of(w).unwrap()).collect();
    (0..ps.len()).all(|i| {
        (0..ps.len()).all(|j| ps.keys[i].is_subset(&ps.keys[j]) == idx.includes(res_of[i], res_of[j]))
    })
}

#[test]
fn dr_condition_characterises_nerode_state_orders() {
    let mut seen = [0usize; 2];
    for n in random_inputs(18, 300) {
        let holds = check_dr_condition(&n);
        seen[usize::from(holds)] += 1;
        assert_eq!(holds, state_order_is_nerode(&n), "{n:?}");
        if holds {
            assert!(isomorphic(&res(&n, Side::Right), &canonical(&n, Side::Right)));
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn canonical_residualization_without_the_dr_condition() {
    // a* with a second copy of the loop entered after one letter.
    let n = Nfa::from_parts(2, &[0], &[0, 1], &[(0, b'a', 0), (0, b'a', 1), (1, b'a', 1)]);
    assert!(isomorphic(&res(&n, Side::Right), &canonical(&n, Side::Right)));
    assert!(!check_dr_condition(&n));
}

#[test]
fn dr_condition_on_canonical_and_minimal_inputs() {
    for n in random_inputs(19, 40) {
        let c = canonical(&n, Side::Right);
        assert_eq!(check_dr_condition(&c), state_order_is_nerode(&c));
        let m = n.determinize().minimize().to_nfa();
        assert_eq!(check_dr_condition(&m), state_order_is_nerode(&m));
    }
    let n = fixtures::seven_words();
    assert!(check_dr_condition(&canonical(&n, Side::Right)));
    assert!(!check_dr_condition(&fixtures::context_dfa()));
    assert!(check_dr_condition(&Nfa::from_parts(1, &[0], &[0], &[(0, b'a', 0)])));
}

#[test]
fn canonical_rfa_that_is_not_strongly_consistent() {
    let m = Nfa::from_parts(
        5,
        &[0],
        &[0, 2, 3],
        &[
            (0, b'a', 1),
            (0, b'b', 2),
            (1, b'a', 3),
            (1, b'b', 4),
            (2, b'a', 2),
            (2, b'b', 2),
            (3, b'a', 1),
            (3, b'b', 0),
            (4, b'a', 3),
        ],
    );
    let c = canonical(&m, Side::Right);
    assert_eq!(c.state_count(), 4);
    assert!(isomorphic(&res(&c, Side::Right), &c));
    assert!(!check_dr_condition(&c));
    // `ba⁻¹L` contains `L`, yet the state for `L` is not reached by `ba`.
    let idx = ResidualIndex::new(&m, &[]);
    let l_state = (0..c.state_count()).find(|&q| residual_label(&c, q, &idx) == idx.state_of(b"")).unwrap();
    assert!(idx.includes(idx.state_of(b"").unwrap(), idx.state_of(b"ba").unwrap()));
    assert!(!c.post_word(c.initial(), b"ba").contains(l_state));
}

#[test]
fn subset_residualization_fails_the_converse_somewhere() {
    let found = random_inputs(20, 300).into_iter().find(|n| {
        check_dr_condition(n) && !isomorphic(&denis_residualize(n), &canonical(n, Side::Right))
    });
    assert!(found.is_some());
}

#[test]
fn isomorphism_detects_relabelling_and_differences() {
    let n = fixtures::seven_words();
    let r = res(&n, Side::Right);
    let k = r.state_count();
    let perm = |q: usize| (q + 1) % k;
    let mut s = Nfa::new(k);
    for (p, a, q) in r.transitions() {
        s.add_transition(perm(p), a, perm(q));
    }
    r.initial().ones().for_each(|q| s.set_initial(perm(q)));
    r.finals().ones().for_each(|q| s.set_final(perm(q)));
    assert!(isomorphic(&r, &s));
    let (p, a, q) = r.transitions().next().unwrap();
    let mut t = s.clone();
    t.add_transition(perm(q), a, perm(p));
    assert!(!isomorphic(&r, &t) || r.successors(q).contains(&(a, p)));
}

#[test]
fn learner_on_universal_language() {
    let target = Nfa::from_parts(1, &[0], &[0], &[(0, b'a', 0), (0, b'b', 0)]);
    let out = learn(&target);
    assert!(out.equivalence_queries <= 2);
    assert!(isomorphic(&out.automaton, &canonical(&target, Side::Right)));
}

#[test]
fn learner_reaches_the_canonical_rfa() {
    let mut rng = StdRng::seed_from_u64(21);
    let mut tried = 0;
    while tried < 60 {
        let target = random_nfa(&mut rng, 3, 2, 0.35);
        if target.determinize().minimize().state_count() > 5 {
            continue;
        }
        tried += 1;
        let out = learn(&target);
        assert!(same_language(&out.automaton, &target));
        assert!(isomorphic(&out.automaton, &canonical(&target, Side::Right)), "{target:?}");
    }
    let n = fixtures::seven_words();
    assert!(isomorphic(&learn(&n).automaton, &canonical(&n, Side::Right)));
}

#[test]
fn table_rows_match_quotients_on_the_suffixes() {
    for target in random_inputs(22, 30) {
        let table = learn(&target).table;
        let s = table.suffixes();
        assert!(s.iter().all(|x| (0..x.len()).all(|i| s.contains(&x[i..].to_vec()))));
        let p = table.prefixes();
        assert!(p.iter().all(|u| (0..u.len()).all(|i| p.contains(&u[..i].to_vec()))));
        for u in p {
            for v in p {
                let (ru, rv) = (table.recorded_row(u).unwrap(), table.recorded_row(v).unwrap());
                let quotient_leq = s.iter().all(|x| {
                    let (ux, vx) = ([u.as_slice(), x].concat(), [v.as_slice(), x].concat());
                    !target.accepts(&ux) || target.accepts(&vx)
                });
                assert_eq!(ru.is_subset(&rv), quotient_leq);
            }
        }
    }
}

#[test]
fn learner_iteration_cap() {
    let n = fixtures::seven_words();
    let err = nl_learn(
        b"abc",
        |w| n.accepts(w),
        |h| equivalence_counterexample(h, &n),
        &Limits { iteration_cap: 1 },
    )
    .unwrap_err();
    assert_eq!(err, crate::Error::IterationCap { cap: 1 });
}
