use std::collections::BTreeSet;

use crate::{Error, Result, Word};

/// A context-free grammar in Chomsky normal form with axiom `X0`.
///
/// Rules are `Xi -> a` (terminal), `Xi -> Xj Xk` (binary) and, for the axiom
/// only, `X0 -> ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    terminals: Vec<BTreeSet<u8>>,
    binaries: Vec<Vec<(usize, usize)>>,
    epsilon: bool,
}

impl CnfGrammar {
    /// Validates and builds a grammar. Every variable needs at least one rule.
    pub fn new(
        variable_count: usize,
        terminal_rules: &[(usize, u8)],
        binary_rules: &[(usize, usize, usize)],
        axiom_epsilon: bool,
    ) -> Result<Self> {
        if variable_count == 0 {
            return Err(Error::invalid("a grammar needs at least the axiom"));
        }
        let mut terminals = vec![BTreeSet::new(); variable_count];
        let mut binaries: Vec<Vec<(usize, usize)>> = vec![Vec::new(); variable_count];
        for &(x, a) in terminal_rules {
            if x >= variable_count {
                return Err(Error::invalid(format!("variable X{x} out of range")));
            }
            terminals[x].insert(a);
        }
        for &(x, y, z) in binary_rules {
            if x >= variable_count || y >= variable_count || z >= variable_count {
                return Err(Error::invalid("binary rule references an unknown variable"));
            }
            if !binaries[x].contains(&(y, z)) {
                binaries[x].push((y, z));
            }
        }
        for x in 0..variable_count {
            if terminals[x].is_empty() && binaries[x].is_empty() && !(x == 0 && axiom_epsilon) {
                return Err(Error::invalid(format!("variable X{x} has no rule")));
            }
        }
        Ok(CnfGrammar { terminals, binaries, epsilon: axiom_epsilon })
    }

    pub fn variable_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn terminal_rules(&self, x: usize) -> &BTreeSet<u8> {
        &self.terminals[x]
    }

    pub fn binary_rules(&self, x: usize) -> &[(usize, usize)] {
        &self.binaries[x]
    }

    pub fn has_epsilon(&self) -> bool {
        self.epsilon
    }

    pub fn alphabet(&self) -> BTreeSet<u8> {
        self.terminals.iter().flatten().copied().collect()
    }

    /// CYK membership test.
    pub fn generates(&self, w: &[u8]) -> bool {
        if w.is_empty() {
            return self.epsilon;
        }
        let n = w.len();
        let v = self.variable_count();
        // table[i][len-1] = set of variables deriving w[i..i+len]
        let mut table = vec![vec![vec![false; v]; n]; n];
        for i in 0..n {
            for x in 0..v {
                table[i][0][x] = self.terminals[x].contains(&w[i]);
            }
        }
        for len in 2..=n {
            for i in 0..=n - len {
                for x in 0..v {
                    let hit = self.binaries[x].iter().any(|&(y, z)| {
                        (1..len).any(|k| table[i][k - 1][y] && table[i + k][len - k - 1][z])
                    });
                    table[i][len - 1][x] = hit;
                }
            }
        }
        table[0][n - 1][0]
    }

    /// All generated words of length at most `max_len`, sorted.
    pub fn words_up_to(&self, max_len: usize) -> BTreeSet<Word> {
        let v = self.variable_count();
        // sets[x][l] = words of length l derivable from X_x
        let mut sets: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); max_len + 1]; v];
        for x in 0..v {
            if max_len >= 1 {
                for &a in &self.terminals[x] {
                    sets[x][1].insert(vec![a]);
                }
            }
        }
        for len in 2..=max_len {
            for x in 0..v {
                let mut acc = BTreeSet::new();
                for &(y, z) in &self.binaries[x] {
                    for k in 1..len {
                        for u in &sets[y][k] {
                            for w in &sets[z][len - k] {
                                let mut uw = u.clone();
                                uw.extend_from_slice(w);
                                acc.insert(uw);
                            }
                        }
                    }
                }
                sets[x][len] = acc;
            }
        }
        let mut out: BTreeSet<Word> = sets[0].iter().flatten().cloned().collect();
        if self.epsilon {
            out.insert(Vec::new());
        }
        out
    }
}
