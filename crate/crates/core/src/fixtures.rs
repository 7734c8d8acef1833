//! Small reference automata and grammars shared by the unit tests.

use crate::{CnfGrammar, Nfa};

/// Left side of the running inclusion pair: `a*(a|b|c)`.
pub fn pair_left() -> Nfa {
    Nfa::from_parts(2, &[0], &[1], &[(0, b'a', 0), (0, b'a', 1), (0, b'b', 1), (0, b'c', 1)])
}

/// Right side of the running inclusion pair: `a*(a(a+b)*a + a+c + ab + bb)`.
pub fn pair_right() -> Nfa {
    Nfa::from_parts(
        5,
        &[0],
        &[4],
        &[
            (0, b'a', 0),
            (0, b'a', 1),
            (0, b'a', 2),
            (0, b'a', 3),
            (0, b'b', 3),
            (1, b'a', 1),
            (1, b'c', 4),
            (2, b'a', 2),
            (2, b'b', 2),
            (2, b'a', 4),
            (3, b'b', 4),
        ],
    )
}

/// DFA for `(b + ab*a)(a + b)*`.
pub fn context_dfa() -> Nfa {
    Nfa::from_parts(
        3,
        &[0],
        &[2],
        &[(0, b'a', 1), (0, b'b', 2), (1, b'a', 2), (1, b'b', 1), (2, b'a', 2), (2, b'b', 2)],
    )
}

/// `X0 -> X0 X1 | X1 X0 | b`, `X1 -> a`, generating `a*ba*`.
pub fn a_star_b_a_star() -> CnfGrammar {
    CnfGrammar::new(2, &[(0, b'b'), (1, b'a')], &[(0, 0, 1), (0, 1, 0)], false).unwrap()
}

/// NFA for `Σ*aΣaΣ*` over `{a, b}`.
pub fn a_gap_a() -> Nfa {
    Nfa::from_parts(
        4,
        &[0],
        &[3],
        &[
            (0, b'a', 0),
            (0, b'b', 0),
            (0, b'a', 1),
            (1, b'a', 2),
            (1, b'b', 2),
            (2, b'a', 3),
            (3, b'a', 3),
            (3, b'b', 3),
        ],
    )
}

/// NFA for `(a + b+a)*`.
pub fn a_or_bplus_a_star() -> Nfa {
    Nfa::from_parts(2, &[0], &[0], &[(0, b'a', 0), (0, b'b', 1), (1, b'a', 0), (1, b'b', 1)])
}

/// Six-state NFA for `{aa, ab, ba, bc, ca, cb, cc}` with a coverable `c`-successor.
pub fn seven_words() -> Nfa {
    Nfa::from_parts(
        6,
        &[0],
        &[5],
        &[
            (0, b'a', 1),
            (0, b'a', 2),
            (0, b'b', 1),
            (0, b'b', 3),
            (0, b'c', 1),
            (0, b'c', 2),
            (0, b'c', 3),
            (0, b'c', 4),
            (1, b'a', 5),
            (2, b'b', 5),
            (3, b'c', 5),
            (4, b'b', 5),
            (4, b'c', 5),
        ],
    )
}

/// A random NFA with `states` states over the first `symbols` letters of `a, b, c, …`.
pub fn random_nfa(rng: &mut impl rand::Rng, states: usize, symbols: u8, density: f64) -> Nfa {
    let mut n = Nfa::new(states);
    for a in 0..symbols {
        n.add_symbol(b'a' + a);
    }
    for p in 0..states {
        for a in 0..symbols {
            for q in 0..states {
                if rng.gen_bool(density) {
                    n.add_transition(p, b'a' + a, q);
                }
            }
        }
        if rng.gen_bool(0.3) {
            n.set_initial(p);
        }
        if rng.gen_bool(0.3) {
            n.set_final(p);
        }
    }
    if n.initial().count_ones(..) == 0 {
        n.set_initial(rng.gen_range(0..states));
    }
    n
}

/// Every word over `alphabet` of length at most `max_len`, shortest first.
pub fn words_up_to(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alphabet {
                let mut v: Vec<u8> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
