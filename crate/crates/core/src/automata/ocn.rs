use std::collections::{BTreeSet, HashSet, VecDeque};

/// `(source, symbol, counter delta, target)`.
pub type OcnTransition = (usize, u8, i8, usize);

/// A one-counter net: an automaton whose transitions add -1, 0 or +1 to a
/// counter that never goes below zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ocn {
    states: usize,
    alphabet: BTreeSet<u8>,
    transitions: Vec<OcnTransition>,
}

impl Ocn {
    pub fn new(states: usize, transitions: &[OcnTransition]) -> crate::Result<Self> {
        let mut o = Ocn { states, alphabet: BTreeSet::new(), transitions: Vec::new() };
        for &t in transitions {
            o.add_transition(t)?;
        }
        Ok(o)
    }

    pub fn add_transition(&mut self, t: OcnTransition) -> crate::Result<()> {
        let (p, a, d, q) = t;
        if p >= self.states || q >= self.states {
            return Err(crate::Error::invalid("OCN transition references an unknown state"));
        }
        if !(-1..=1).contains(&d) {
            return Err(crate::Error::invalid("OCN counter delta must be -1, 0 or +1"));
        }
        self.alphabet.insert(a);
        if !self.transitions.contains(&t) {
            self.transitions.push(t);
        }
        Ok(())
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> &BTreeSet<u8> {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[OcnTransition] {
        &self.transitions
    }

    /// Exact trace test by exploring configurations; counters never exceed
    /// `start.1 + |w|`, so the search is finite.
    pub fn is_trace(&self, start: (usize, u64), w: &[u8]) -> bool {
        let mut current: HashSet<(usize, u64)> = HashSet::from([start]);
        for &a in w {
            let mut next = HashSet::new();
            for &(p, n) in &current {
                for &(s, b, d, q) in &self.transitions {
                    if s == p && b == a {
                        let m = n as i64 + d as i64;
                        if m >= 0 {
                            next.insert((q, m as u64));
                        }
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            current = next;
        }
        true
    }

    /// Every trace of length at most `max_len` from `start`, by breadth-first search.
    pub fn traces_up_to(&self, start: (usize, u64), max_len: usize) -> BTreeSet<Vec<u8>> {
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::from([(Vec::new(), start)]);
        let mut seen = HashSet::new();
        while let Some((w, (p, n))) = queue.pop_front() {
            if !seen.insert((w.clone(), p, n)) {
                continue;
            }
            out.insert(w.clone());
            if w.len() == max_len {
                continue;
            }
            for &(s, b, d, q) in &self.transitions {
                if s == p {
                    let m = n as i64 + d as i64;
                    if m >= 0 {
                        let mut w2 = w.clone();
                        w2.push(b);
                        queue.push_back((w2, (q, m as u64)));
                    }
                }
            }
        }
        out
    }
}
