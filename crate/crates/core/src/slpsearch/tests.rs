use super::*;
use crate::automata::equivalence_counterexample;
use crate::Nfa;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn lit(b: u8) -> Regex {
    Regex::Literal(b)
}

fn plus(b: u8) -> Regex {
    Regex::Plus(Box::new(lit(b)))
}

#[test]
fn parses_the_plus_chain() {
    let r = parse_regex("a+bb+a+c+").unwrap();
    assert_eq!(r, Regex::Concat(vec![plus(b'a'), lit(b'b'), plus(b'b'), plus(b'a'), plus(b'c')]));
    assert_eq!(r.leaf_count(), 5);
}

#[test]
fn parse_errors_carry_offsets() {
    let off = |s: &str| match parse_regex(s).unwrap_err() {
        crate::Error::Parse { offset, .. } => offset,
        e => panic!("{e:?}"),
    };
    assert_eq!(off("("), 0);
    assert_eq!(off("ab)"), 2);
    assert_eq!(off("a|"), 2);
    assert_eq!(off("x{3,2}"), 1);
    assert_eq!(off("[a"), 0);
    assert_eq!(off("*a"), 0);
}

#[test]
fn bounded_class_repetition() {
    let r = parse_regex("[0-9]{4}").unwrap();
    let Regex::Repeat { inner, min: 4, max: 4 } = &r else { panic!("{r:?}") };
    let Regex::Class(set) = inner.as_ref() else { panic!() };
    assert_eq!(set.len(), 10);
    let n = compile_regex(&r).unwrap();
    assert!(n.accepts(b"2019") && !n.accepts(b"201") && !n.accepts(b"20a9"));
}

#[test]
fn literal_pair_is_a_three_state_chain() {
    let n = compile_pattern("ba").unwrap();
    assert_eq!(n.state_count(), 3);
    assert_eq!(n.transition_count(), 2);
    assert!(n.accepts(b"ba") && !n.accepts(b"ab"));
}

#[test]
fn dot_reads_everything_but_newline() {
    let n = compile_pattern(".").unwrap();
    for b in 0..=255u8 {
        assert_eq!(n.accepts(&[b]), b != b'\n');
    }
    let neg = compile_pattern("[^a]").unwrap();
    assert!(!neg.accepts(b"\n") && !neg.accepts(b"a") && neg.accepts(b"b"));
}

#[test]
fn empty_matching_patterns_are_rejected() {
    for p in ["a*", "(ab)?", "x{0,3}", "a|b*"] {
        assert_eq!(compile_pattern(p).unwrap_err(), crate::Error::EmptyMatch, "{p}");
    }
}

#[test]
fn homogeneous_kinds() {
    let kind = |s: &str| homogeneous_kind(&parse_regex(s).unwrap());
    assert_eq!(kind("a+bb+a+c+"), Some(HomogeneousKind::Plus));
    assert_eq!(kind("a+b*"), None);
    assert_eq!(kind("(a|b)(a|c)"), Some(HomogeneousKind::Alt));
    assert_eq!(kind("a*b*b*a*c*"), Some(HomogeneousKind::Star));
    assert_eq!(kind("a[bc]"), None);
}

fn check_equivalent(pattern: &str, states: usize) {
    let ast = parse_regex(pattern).unwrap();
    let kind = homogeneous_kind(&ast).unwrap();
    let d = homogeneous_dfa(&ast, kind).unwrap();
    assert_eq!(d.state_count(), states, "{pattern}");
    let reference = position_automaton(&ast).unwrap();
    assert_eq!(equivalence_counterexample(&d.to_nfa(), &reference), None, "{pattern}");
}

#[test]
fn homogeneous_dfas_match_the_general_construction() {
    check_equivalent("a+b+b+a+c+", 6);
    check_equivalent("a+bb+a+c+", 6);
    check_equivalent("(a|b)(a|c)(b|c)(a|c)", 5);
    check_equivalent("a*b*b*a*c*", 5);
    check_equivalent("a*b*a*", 4);
    check_equivalent("a+a", 3);
    check_equivalent("aa+a+b", 5);
}

#[test]
fn counting_info_example() {
    let t = CountingInfo::new(true, true, false, 0);
    let u = CountingInfo::new(true, false, true, 0);
    let x = combine_counting(t, u, true);
    assert_eq!(x, CountingInfo::new(true, true, true, 1));
    assert_eq!(x.lines(), 3);
    let f = CountingInfo::default();
    assert_eq!(combine_counting(f, f, false), f);
}

fn text_slp(text: &[u8]) -> Slp {
    repair_compress(text).unwrap()
}

#[test]
fn counts_and_reports_the_single_matching_line() {
    let p = text_slp(b"ab\na\nbab\n");
    let n = compile_pattern("ba").unwrap();
    assert_eq!(count_lines(&p, &n).unwrap(), 1);
    assert_eq!(report_lines(&p, &n).unwrap(), vec![(3, b"bab".to_vec())]);
    let none = compile_pattern("b").unwrap();
    assert_eq!(count_lines(&text_slp(b"aa"), &none).unwrap(), 0);
    assert!(report_lines(&text_slp(b"aa"), &none).unwrap().is_empty());
}

#[test]
fn match_existence_on_a_repetitive_text() {
    // X1 -> ab, X2 -> X1 X1, axiom X2 X2: "abababab".
    let p = Slp::new(vec![vec![97, 98], vec![257, 257], vec![258, 258]]).unwrap();
    let ab_or_bb = compile_pattern("ab|bb").unwrap();
    assert!(slp_match_exists(&p, &ab_or_bb));
    assert!(!slp_match_exists(&p, &compile_pattern("aa").unwrap()));
    let single = Slp::new(vec![vec![97, 98]]).unwrap();
    assert!(slp_match_exists(&single, &compile_pattern("ab").unwrap()));
}

#[test]
fn repair_examples() {
    let p = repair_compress(b"abab").unwrap();
    assert_eq!(p.rule_count(), 2);
    assert_eq!(p.rule(0), &[97, 98]);
    assert_eq!(p.axiom(), &[257, 257]);
    let distinct = repair_compress(b"abcdef").unwrap();
    assert_eq!(distinct.rule_count(), 1);
    assert_eq!(distinct.axiom().len(), 6);
    assert!(repair_compress(b"a").is_err());
    // runs count non-overlapping pairs
    assert_eq!(repair_compress(b"aaa").unwrap().rule_count(), 1);
}

#[test]
fn doubling_grammar_expands_to_a_power_of_two() {
    let p = Slp::new(vec![vec![97, 97], vec![257, 257], vec![258, 258], vec![259, 259]]).unwrap();
    assert_eq!(p.decompress(1 << 20).unwrap(), vec![b'a'; 16]);
    assert_eq!(p.decompress(15).unwrap_err(), crate::Error::OutputCap { cap: 15 });
    assert_eq!(Slp::new(vec![vec![97, 98]]).unwrap().decompress(10).unwrap(), b"ab");
}

#[test]
fn invalid_programs_are_rejected() {
    assert!(Slp::new(vec![]).is_err());
    assert!(Slp::new(vec![vec![97]]).is_err());
    assert!(Slp::new(vec![vec![97, 257]]).is_err());
    assert!(Slp::new(vec![vec![97, 98, 99], vec![257, 97]]).is_err());
    assert!(Slp::new(vec![vec![256, 97]]).is_err());
}

#[test]
fn binary_and_text_layouts_round_trip() {
    let p = repair_compress(b"abracadabra abracadabra\n").unwrap();
    let bytes = p.to_bytes();
    assert_eq!(&bytes[..4], b"SLP1");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize, p.rule_count());
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize, p.axiom().len());
    assert_eq!(bytes.len(), 12 + 4 * (2 * (p.rule_count() - 1) + p.axiom().len()));
    assert_eq!(Slp::from_bytes(&bytes).unwrap(), p);
    assert_eq!(Slp::load(&bytes).unwrap(), p);
    assert_eq!(Slp::parse_text(&p.to_text()).unwrap(), p);
    assert_eq!(Slp::load(p.to_text().as_bytes()).unwrap(), p);
    assert!(matches!(Slp::from_bytes(&bytes[..bytes.len() - 1]), Err(crate::Error::Parse { .. })));
    assert!(matches!(Slp::from_bytes(b"SLP2"), Err(crate::Error::Parse { offset: 0, .. })));
    let bad = "rule 'a' 'b'\naxiom X1 X2\n";
    assert!(matches!(Slp::parse_text(bad), Err(crate::Error::Parse { offset: 22, .. })));
}

/// Counting info computed straight from the definition.
fn info_of(text: &[u8], n: &Nfa) -> CountingInfo {
    let lines: Vec<&[u8]> = text.split(|&b| b == b'\n').collect();
    let hit = |l: &[u8]| contains_factor(n, l);
    let k = lines.len();
    CountingInfo {
        n: k > 1,
        l: hit(lines[0]),
        r: hit(lines[k - 1]),
        m: if k > 2 { lines[1..k - 1].iter().filter(|l| hit(l)).count() as u64 } else { 0 },
    }
}

/// A match inside the line around the boundary of `x|y` that lies in neither side.
fn straddles(x: &[u8], y: &[u8], n: &Nfa) -> bool {
    let s = x.rsplit(|&b| b == b'\n').next().unwrap();
    let p = y.split(|&b| b == b'\n').next().unwrap();
    (0..s.len()).any(|i| (1..=p.len()).any(|j| n.accepts(&[&s[i..], &p[..j]].concat())))
}

const SUITE: &[&str] = &["ba", "ab(ca)?", "b(a|\\n)b", "a", "ab|bb", "a+b", "b[ab]a", "(ab)+", "a.b", "[^b]{2}", "ba*b", "a{2,3}", "(a|b)(a|c)"];

fn random_text(rng: &mut StdRng, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| match rng.gen_range(0..10) {
            0..=3 => b'a',
            4..=6 => b'b',
            7 => b'c',
            _ => b'\n',
        })
        .collect()
}

#[test]
fn counting_info_is_sound_at_every_rule() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..60 {
        let len = rng.gen_range(2..300);
        let text = random_text(&mut rng, len);
        let p = repair_compress(&text).unwrap();
        for pat in SUITE {
            let n = search_automaton(&parse_regex(pat).unwrap()).unwrap();
            let s = LineSearch::new(&p, &n).unwrap();
            let mut expansions: Vec<Vec<u8>> = Vec::new();
            for i in 0..p.rule_count() {
                let mut w = Vec::new();
                for &sym in p.rule(i) {
                    match rule_index(sym) {
                        Some(j) => w.extend_from_slice(&expansions[j]),
                        None => w.push(sym as u8),
                    }
                }
                if w.len() <= 4096 {
                    assert_eq!(s.rule_info(i), info_of(&w, &n), "{pat} on {:?}", String::from_utf8_lossy(&w));
                }
                expansions.push(w);
            }
        }
    }
}

#[test]
fn counting_and_reporting_agree_with_scanning() {
    let mut rng = StdRng::seed_from_u64(17);
    for round in 0..200 {
        let len = rng.gen_range(2..if round % 20 == 0 { 10_000 } else { 600 });
        let text = random_text(&mut rng, len);
        let p = repair_compress(&text).unwrap();
        for pat in SUITE {
            let ast = parse_regex(pat).unwrap();
            for n in [compile_regex(&ast).unwrap(), search_automaton(&ast).unwrap()] {
                let expected = scan_lines(&text, &n);
                let s = LineSearch::new(&p, &n).unwrap();
                assert_eq!(s.count(), expected.len() as u64, "{pat}");
                assert_eq!(s.report(), expected, "{pat}");
                assert_eq!(slp_match_exists(&p, &n), contains_factor(&n, &text), "{pat}");
            }
        }
    }
}

#[test]
fn dfa_patterns_stay_linear() {
    let mut rng = StdRng::seed_from_u64(23);
    for _ in 0..20 {
        let text = random_text(&mut rng, 5000);
        let p = repair_compress(&text).unwrap();
        for pat in ["ba", "abba", "a+b+a", "(a|b)(a|c)b"] {
            let n = search_automaton(&parse_regex(pat).unwrap()).unwrap();
            assert!(n.is_deterministic());
            let s = LineSearch::new(&p, &n).unwrap();
            let (t, states) = (p.size() as u64, n.state_count() as u64);
            assert!(s.stats().inner_steps <= 8 * t * states, "{pat}: {} > 8·{t}·{states}", s.stats().inner_steps);
        }
    }
}

fn arb_regex() -> impl Strategy<Value = Regex> {
    let leaf = prop_oneof![
        (0u8..3).prop_map(|i| Regex::Literal(b'a' + i)),
        Just(Regex::Any),
        Just(Regex::Class({
            let mut s = ByteSet::empty();
            s.insert(b'a');
            s.insert(b'c');
            s
        })),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Regex::Concat),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Regex::Alt),
            inner.clone().prop_map(|r| Regex::Star(Box::new(r))),
            inner.clone().prop_map(|r| Regex::Plus(Box::new(r))),
            inner.clone().prop_map(|r| Regex::Optional(Box::new(r))),
            (inner.clone(), 0u32..3, 0u32..2).prop_map(|(r, m, d)| Regex::Repeat { inner: Box::new(r), min: m, max: m + d }),
            inner.prop_map(|r| Regex::Group(Box::new(r))),
        ]
    })
}

/// Backtracking matcher: every end position reachable after matching `r` from `i`.
fn ends(r: &Regex, w: &[u8], i: usize) -> Vec<usize> {
    let mut out = match r {
        Regex::Literal(b) => (w.get(i) == Some(b)).then_some(i + 1).into_iter().collect(),
        Regex::Class(s) => w.get(i).filter(|&&c| s.contains(c)).map(|_| i + 1).into_iter().collect(),
        Regex::Any => w.get(i).filter(|&&c| c != b'\n').map(|_| i + 1).into_iter().collect(),
        Regex::Group(x) => ends(x, w, i),
        Regex::Concat(xs) => xs.iter().fold(vec![i], |acc, x| acc.iter().flat_map(|&j| ends(x, w, j)).collect()),
        Regex::Alt(xs) => xs.iter().flat_map(|x| ends(x, w, i)).collect(),
        Regex::Optional(x) => std::iter::once(i).chain(ends(x, w, i)).collect(),
        Regex::Star(x) | Regex::Plus(x) => {
            let mut seen = vec![i];
            let mut frontier = vec![i];
            while let Some(j) = frontier.pop() {
                for k in ends(x, w, j) {
                    if !seen.contains(&k) {
                        seen.push(k);
                        frontier.push(k);
                    }
                }
            }
            if matches!(r, Regex::Plus(_)) {
                let once: Vec<usize> = ends(x, w, i);
                seen.retain(|&j| j != i || once.contains(&i));
                // any position reached by one or more iterations
                let mut plus: Vec<usize> = Vec::new();
                for &j in &seen {
                    if j != i || once.contains(&i) {
                        plus.push(j);
                    }
                }
                let mut more = once.clone();
                for &j in &plus {
                    if !more.contains(&j) && (j != i) {
                        more.push(j);
                    }
                }
                more
            } else {
                seen
            }
        }
        Regex::Repeat { inner, min, max } => {
            let mut out = Vec::new();
            let mut cur = vec![i];
            for k in 0..=*max {
                if k >= *min {
                    out.extend(cur.iter().copied());
                }
                cur = cur.iter().flat_map(|&j| ends(inner, w, j)).collect();
                cur.sort_unstable();
                cur.dedup();
            }
            out
        }
    };
    out.sort_unstable();
    out.dedup();
    out
}

proptest! {
    #[test]
    fn position_automaton_agrees_with_backtracking(r in arb_regex()) {
        let n = position_automaton(&r).unwrap();
        prop_assert_eq!(n.is_final(0), r.nullable());
        for w in crate::fixtures::words_up_to(b"abc", 5) {
            prop_assert_eq!(n.accepts(&w), ends(&r, &w, 0).contains(&w.len()), "{:?} on {:?}", r, String::from_utf8_lossy(&w));
        }
    }

    #[test]
    fn repair_round_trips(text in proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b'), Just(b'\n'), any::<u8>()], 2..400)) {
        let p = repair_compress(&text).unwrap();
        prop_assert_eq!(p.decompress(u64::MAX).unwrap(), text.clone());
        prop_assert_eq!(Slp::from_bytes(&p.to_bytes()).unwrap(), p.clone());
        prop_assert_eq!(Slp::parse_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn counting_composes_over_three_way_splits(seed in any::<u64>(), pat in 0..SUITE.len()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let len = rng.gen_range(3..80);
        let text = random_text(&mut rng, len);
        let i = rng.gen_range(1..len - 1);
        let j = rng.gen_range(i + 1..len);
        let n = compile_pattern(SUITE[pat]).unwrap();
        let (x, y, z) = (&text[..i], &text[i..j], &text[j..]);
        let xy = combine_counting(info_of(x, &n), info_of(y, &n), straddles(x, y, &n));
        prop_assert_eq!(xy, info_of(&text[..j], &n));
        let left = combine_counting(xy, info_of(z, &n), straddles(&text[..j], z, &n));
        let yz = combine_counting(info_of(y, &n), info_of(z, &n), straddles(y, z, &n));
        let right = combine_counting(info_of(x, &n), yz, straddles(x, &text[i..], &n));
        prop_assert_eq!(left, info_of(&text, &n));
        prop_assert_eq!(right, info_of(&text, &n));
    }
}

#[test]
fn paths_resumed_after_a_final_state_do_not_count() {
    // X1 -> ab, X2 -> X1 '\n', X3 -> X2 c, axiom X3 d: the text "ab\ncd".
    let p = Slp::new(vec![vec![97, 98], vec![257, 10], vec![258, 99], vec![259, 100]]).unwrap();
    let n = compile_pattern("ab(cd)?").unwrap();
    assert_eq!(count_lines(&p, &n).unwrap(), 1);
    assert_eq!(report_lines(&p, &n).unwrap(), vec![(1, b"ab".to_vec())]);
}
