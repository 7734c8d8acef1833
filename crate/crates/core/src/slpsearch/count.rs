//! Match existence, line counting and line reporting directly on an SLP.
//!
//! Every symbol `τ` carries a relation `E_τ ⊆ Q × Q` over pattern states.
//! Initial and final states implicitly loop on every byte, so `(q1, q2) ∈ E_τ`
//! when the automaton can go from `q1` to `q2` reading the expansion of `τ`,
//! or a suffix of it from an initial `q1`, or a prefix of it into a final `q2`.

use super::slp::{rule_index, Slp, Symbol};
use crate::automata::{Nfa, StateSet};
use crate::{Error, Result};

const NEWLINE: u8 = b'\n';

/// Line summary of an expansion `u`: whether `u` holds a newline (`n`),
/// whether its first line contains a match (`l`), likewise its last line
/// (`r`), and how many newline-delimited lines strictly inside `u` match (`m`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CountingInfo {
    pub n: bool,
    pub l: bool,
    pub r: bool,
    pub m: u64,
}

impl CountingInfo {
    pub fn new(n: bool, l: bool, r: bool, m: u64) -> Self {
        CountingInfo { n, l, r, m }
    }

    /// Matching lines of the expansion, first and last included.
    pub fn lines(&self) -> u64 {
        self.m + u64::from(self.l) + u64::from(self.n && self.r)
    }
}

/// Info of `αβ` from those of `α` and `β`; `new_match` reports a match that
/// straddles the boundary.
pub fn combine_counting(a: CountingInfo, b: CountingInfo, new_match: bool) -> CountingInfo {
    CountingInfo {
        n: a.n || b.n,
        l: if a.n { a.l } else { a.l || b.l || new_match },
        r: if b.n { b.r } else { a.r || b.r || new_match },
        m: a.m + b.m + u64::from(a.n && b.n && (a.r || b.l || new_match)),
    }
}

/// Counters exposed for complexity checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Executions of the innermost composition step.
    pub inner_steps: u64,
    /// Relation entries stored over all symbols.
    pub stored_pairs: u64,
    /// Compositions performed (binary rules plus axiom folds).
    pub compositions: u64,
}

/// Relation composition with the implicit loops, backed by two reusable
/// `s × s` tables: `k` holds the successors of every state under the right
/// operand, `mark` the last composition that stored each pair.
struct Composer {
    s: usize,
    initial: Vec<bool>,
    finals: Vec<bool>,
    k: Vec<Vec<u32>>,
    k_dirty: Vec<usize>,
    mark: Vec<u64>,
    round: u64,
    stats: SearchStats,
}

impl Composer {
    fn new(n: &Nfa) -> Self {
        let s = n.state_count();
        Composer {
            s,
            initial: (0..s).map(|q| n.is_initial(q)).collect(),
            finals: (0..s).map(|q| n.is_final(q)).collect(),
            k: vec![Vec::new(); s],
            k_dirty: Vec::new(),
            mark: vec![0; s * s],
            round: 0,
            stats: SearchStats::default(),
        }
    }

    /// `E_α ∘ E_β` with the implicit loops, plus whether some pair runs
    /// initial → (proper suffix of α) → q' → (proper prefix of β) → final
    /// through a state `q'` that is neither initial nor final.
    fn compose(&mut self, ea: &[(u32, u32)], eb: &[(u32, u32)]) -> (Vec<(u32, u32)>, bool) {
        for &p in &self.k_dirty {
            self.k[p].clear();
        }
        self.k_dirty.clear();
        for &(p, q) in eb {
            if self.k[p as usize].is_empty() {
                self.k_dirty.push(p as usize);
            }
            self.k[p as usize].push(q);
        }
        self.round += 1;
        self.stats.compositions += 1;
        let mut out = Vec::new();
        let mut new_match = false;
        let loops = (0..self.s as u32).filter(|&q| self.initial[q as usize]).map(|q| (q, q));
        for (q1, qm) in ea.iter().copied().chain(loops) {
            let stay = self.finals[qm as usize].then_some(qm);
            for &q2 in self.k[qm as usize].iter().chain(stay.iter()) {
                self.stats.inner_steps += 1;
                let cell = &mut self.mark[q1 as usize * self.s + q2 as usize];
                if *cell != self.round {
                    *cell = self.round;
                    out.push((q1, q2));
                }
                new_match |= self.initial[q1 as usize]
                    && !self.initial[qm as usize]
                    && !self.finals[qm as usize]
                    && self.finals[q2 as usize];
            }
        }
        self.stats.stored_pairs += out.len() as u64;
        (out, new_match)
    }

    fn accepting(&self, e: &[(u32, u32)]) -> bool {
        e.iter().any(|&(p, q)| self.initial[p as usize] && self.finals[q as usize])
    }
}

fn terminal_relations(n: &Nfa, skip_newline: bool) -> Vec<Vec<(u32, u32)>> {
    let mut rel = vec![Vec::new(); 256];
    for (p, a, q) in n.transitions() {
        if !(skip_newline && a == NEWLINE) {
            rel[a as usize].push((p as u32, q as u32));
        }
    }
    rel
}

fn relation<'r>(s: Symbol, terms: &'r [Vec<(u32, u32)>], rels: &'r [Vec<(u32, u32)>]) -> &'r [(u32, u32)] {
    match rule_index(s) {
        Some(j) => &rels[j],
        None => &terms[s as usize],
    }
}

/// Whether some factor of the text of `p` lies in `L(n)`.
pub fn slp_match_exists(p: &Slp, n: &Nfa) -> bool {
    let mut c = Composer::new(n);
    if (0..c.s).any(|q| c.initial[q] && c.finals[q]) {
        return true;
    }
    let terms = terminal_relations(n, false);
    let mut rels: Vec<Vec<(u32, u32)>> = Vec::with_capacity(p.rule_count());
    for (x, y) in p.binary_rules() {
        let ex = relation(x, &terms, &rels);
        let ey = relation(y, &terms, &rels);
        let (e, _) = c.compose(ex, ey);
        rels.push(e);
    }
    let axiom = p.axiom();
    let mut acc = relation(axiom[0], &terms, &rels).to_vec();
    for &s in &axiom[1..] {
        let es = relation(s, &terms, &rels);
        acc = c.compose(&acc, es).0;
    }
    c.accepting(&acc)
}

/// Drops edges leaving final states and edges entering initial states.
/// Every match has a factor accepted by the pruned automaton, so the
/// language of texts containing a match is unchanged; afterwards each stored
/// pair stands for a genuine newline-free path. Newline edges go as well.
pub fn prune_for_lines(n: &Nfa) -> Nfa {
    let mut out = Nfa::new(n.state_count());
    for &a in n.alphabet() {
        if a != NEWLINE {
            out.add_symbol(a);
        }
    }
    for q in n.initial().ones() {
        out.set_initial(q);
    }
    for q in n.finals().ones() {
        out.set_final(q);
    }
    for (p, a, q) in n.transitions() {
        if a != NEWLINE && !n.is_final(p) && !n.is_initial(q) {
            out.add_transition(p, a, q);
        }
    }
    out
}

/// Tables produced by the line counter, kept for lazy reporting.
pub struct LineSearch<'a> {
    slp: &'a Slp,
    /// Per rule: counting info, the straddling-match flag and the newline count.
    rules: Vec<(CountingInfo, bool, u64)>,
    terminals: [CountingInfo; 256],
    /// Per axiom step `i ≥ 1`: info of the prefix `σ1…σi` and the flag of its last join.
    axiom_steps: Vec<(CountingInfo, bool)>,
    stats: SearchStats,
}

impl<'a> LineSearch<'a> {
    /// Runs the bottom-up pass. Patterns accepting the empty word are rejected.
    pub fn new(slp: &'a Slp, pattern: &Nfa) -> Result<Self> {
        if pattern.initial().intersection(pattern.finals()).next().is_some() {
            return Err(Error::EmptyMatch);
        }
        let n = prune_for_lines(pattern);
        let mut c = Composer::new(&n);
        let terms = terminal_relations(&n, true);
        let mut terminals = [CountingInfo::default(); 256];
        for (a, info) in terminals.iter_mut().enumerate() {
            let hit = c.accepting(&terms[a]);
            *info = CountingInfo::new(a as u8 == NEWLINE, hit, hit, 0);
        }
        let mut rels: Vec<Vec<(u32, u32)>> = Vec::with_capacity(slp.rule_count());
        let mut rules: Vec<(CountingInfo, bool, u64)> = Vec::with_capacity(slp.rule_count());
        let newlines = |s: Symbol, rules: &Vec<(CountingInfo, bool, u64)>| match rule_index(s) {
            Some(j) => rules[j].2,
            None => u64::from(s as u8 == NEWLINE),
        };
        let info = |s: Symbol, rules: &Vec<(CountingInfo, bool, u64)>| match rule_index(s) {
            Some(j) => rules[j].0,
            None => terminals[s as usize],
        };
        for (x, y) in slp.binary_rules() {
            let (e, m) = {
                let ex = relation(x, &terms, &rels);
                let ey = relation(y, &terms, &rels);
                c.compose(ex, ey)
            };
            rels.push(e);
            let ci = combine_counting(info(x, &rules), info(y, &rules), m);
            rules.push((ci, m, newlines(x, &rules) + newlines(y, &rules)));
        }
        let axiom = slp.axiom();
        let first = axiom[0];
        let mut acc = relation(first, &terms, &rels).to_vec();
        let mut acc_info = info(first, &rules);
        let mut acc_nl = newlines(first, &rules);
        let mut axiom_steps = Vec::with_capacity(axiom.len());
        axiom_steps.push((acc_info, false));
        for &s in &axiom[1..] {
            let es = relation(s, &terms, &rels);
            let (e, m) = c.compose(&acc, es);
            acc = e;
            acc_info = combine_counting(acc_info, info(s, &rules), m);
            acc_nl += newlines(s, &rules);
            axiom_steps.push((acc_info, m));
        }
        rules.push((acc_info, false, acc_nl));
        Ok(LineSearch { slp, rules, terminals, axiom_steps, stats: c.stats })
    }

    /// Counting info of the whole text.
    pub fn info(&self) -> CountingInfo {
        self.rules.last().unwrap().0
    }

    /// Number of matching lines.
    pub fn count(&self) -> u64 {
        self.info().lines()
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// Counting info of rule `i` (zero-based; the last is the axiom).
    pub fn rule_info(&self, i: usize) -> CountingInfo {
        self.rules[i].0
    }

    fn sym_info(&self, s: Symbol) -> CountingInfo {
        match rule_index(s) {
            Some(j) => self.rules[j].0,
            None => self.terminals[s as usize],
        }
    }

    fn sym_newlines(&self, s: Symbol) -> u64 {
        match rule_index(s) {
            Some(j) => self.rules[j].2,
            None => u64::from(s as u8 == NEWLINE),
        }
    }

    /// Zero-based numbers of the matching lines, ascending, found top-down
    /// while skipping every subtree without a closed matching line.
    pub fn matching_line_numbers(&self) -> Vec<u64> {
        enum Task {
            Visit(Symbol, u64),
            Emit(u64),
        }
        let total = self.info();
        let mut out = Vec::new();
        if total.l {
            out.push(0);
        }
        let axiom = self.slp.axiom();
        // Closed lines of the axiom chain, as if it were left-nested binary rules.
        let mut base = 0;
        let mut tasks: Vec<Task> = Vec::new();
        tasks.push(Task::Visit(axiom[0], 0));
        base += self.sym_newlines(axiom[0]);
        for (i, &s) in axiom.iter().enumerate().skip(1) {
            let (prev, _) = self.axiom_steps[i - 1];
            let (_, m) = self.axiom_steps[i];
            let si = self.sym_info(s);
            if prev.n && si.n && (prev.r || si.l || m) {
                tasks.push(Task::Emit(base));
            }
            tasks.push(Task::Visit(s, base));
            base += self.sym_newlines(s);
        }
        tasks.reverse();
        let mut stack = tasks;
        while let Some(t) = stack.pop() {
            match t {
                Task::Emit(line) => out.push(line),
                Task::Visit(s, base) => {
                    let Some(j) = rule_index(s) else { continue };
                    let (info, m, _) = self.rules[j];
                    if info.m == 0 {
                        continue;
                    }
                    let rhs = self.slp.rule(j);
                    let (x, y) = (rhs[0], rhs[1]);
                    let (a, b) = (self.sym_info(x), self.sym_info(y));
                    let mid = base + self.sym_newlines(x);
                    stack.push(Task::Visit(y, mid));
                    if a.n && b.n && (a.r || b.l || m) {
                        stack.push(Task::Emit(mid));
                    }
                    stack.push(Task::Visit(x, base));
                }
            }
        }
        let last = base;
        if total.n && total.r {
            out.push(last);
        }
        out
    }

    /// Matching lines as `(1-based line number, contents)`, decompressing only
    /// the subtrees that overlap one of them.
    pub fn report(&self) -> Vec<(u64, Vec<u8>)> {
        let wanted = self.matching_line_numbers();
        let mut out: Vec<(u64, Vec<u8>)> = wanted.iter().map(|&l| (l + 1, Vec::new())).collect();
        if wanted.is_empty() {
            return out;
        }
        let mut next = 0;
        let mut line = 0u64;
        let mut stack: Vec<Symbol> = self.slp.axiom().iter().rev().copied().collect();
        while let Some(s) = stack.pop() {
            if next == wanted.len() {
                break;
            }
            let nl = self.sym_newlines(s);
            if wanted[next] > line + nl {
                line += nl;
                continue;
            }
            match rule_index(s) {
                Some(j) => stack.extend(self.slp.rule(j).iter().rev()),
                None if s as u8 == NEWLINE => {
                    if wanted[next] == line {
                        next += 1;
                    }
                    line += 1;
                }
                None => out[next].1.push(s as u8),
            }
        }
        out
    }
}

/// Number of newline-delimited lines of the text of `p` containing a factor in `L(n)`.
pub fn count_lines(p: &Slp, n: &Nfa) -> Result<u64> {
    Ok(LineSearch::new(p, n)?.count())
}

/// The matching lines of the text of `p`, in order, numbered from 1.
pub fn report_lines(p: &Slp, n: &Nfa) -> Result<Vec<(u64, Vec<u8>)>> {
    Ok(LineSearch::new(p, n)?.report())
}

/// Reference line counter on uncompressed text: splits on newlines and
/// scans each line for a factor in `L(n)`.
pub fn scan_lines(text: &[u8], n: &Nfa) -> Vec<(u64, Vec<u8>)> {
    text.split(|&b| b == NEWLINE)
        .enumerate()
        .filter(|(_, line)| contains_factor(n, line))
        .map(|(i, line)| (i as u64 + 1, line.to_vec()))
        .collect()
}

/// Whether some factor of `w` is accepted by `n`.
pub fn contains_factor(n: &Nfa, w: &[u8]) -> bool {
    let mut cur: StateSet = n.initial().clone();
    if cur.intersection(n.finals()).next().is_some() {
        return true;
    }
    for &a in w {
        cur = n.post(&cur, a);
        cur.union_with(n.initial());
        if cur.intersection(n.finals()).next().is_some() {
            return true;
        }
    }
    false
}
