//! Straight-line programs: a list of rules, each a sequence of earlier
//! symbols, whose last rule (the axiom) derives the whole text.
//!
//! Symbol ids below 256 are bytes; id `256 + i` names rule `i`, counting from 1.

use std::collections::HashMap;

use crate::automata::text::{expect_arity, format_symbol, lines, parse_symbol, tokenize, Token};
use crate::{Error, Result};

pub type Symbol = u32;

/// Id of the first rule.
pub const FIRST_RULE: Symbol = 257;

pub fn rule_symbol(index: usize) -> Symbol {
    FIRST_RULE + index as Symbol
}

/// `Some(i)` for the zero-based rule index behind `s`, `None` for a byte.
pub fn rule_index(s: Symbol) -> Option<usize> {
    (s >= FIRST_RULE).then(|| (s - FIRST_RULE) as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp {
    rules: Vec<Vec<Symbol>>,
}

const MAGIC: &[u8; 4] = b"SLP1";

impl Slp {
    /// Validates and wraps `rules` (the last one is the axiom).
    pub fn new(rules: Vec<Vec<Symbol>>) -> Result<Slp> {
        let t = rules.len();
        if t == 0 {
            return Err(Error::invalid("an SLP needs at least an axiom"));
        }
        for (i, rhs) in rules.iter().enumerate() {
            let axiom = i + 1 == t;
            if !axiom && rhs.len() != 2 {
                return Err(Error::invalid(format!("rule {} must have exactly two symbols", i + 1)));
            }
            if axiom && rhs.len() < 2 {
                return Err(Error::invalid("the axiom needs at least two symbols"));
            }
            for &s in rhs {
                if s == 256 || rule_index(s).is_some_and(|j| j >= i) {
                    return Err(Error::invalid(format!("rule {} refers to symbol {s}, not yet defined", i + 1)));
                }
            }
        }
        Ok(Slp { rules })
    }

    /// Number of rules, axiom included.
    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Binary rules, i.e. every rule but the axiom.
    pub fn binary_rules(&self) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        self.rules[..self.rules.len() - 1].iter().map(|r| (r[0], r[1]))
    }

    pub fn rule(&self, i: usize) -> &[Symbol] {
        &self.rules[i]
    }

    pub fn axiom(&self) -> &[Symbol] {
        self.rules.last().unwrap()
    }

    /// Grammar size: right-hand-side symbols over all rules.
    pub fn size(&self) -> usize {
        self.rules.iter().map(Vec::len).sum()
    }

    /// Per-rule fold of `leaf` over expansions, combining children with `join`.
    pub fn fold<T: Clone>(&self, leaf: impl Fn(u8) -> T, join: impl Fn(&T, &T) -> T) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.rules.len());
        for rhs in &self.rules {
            let get = |s: Symbol, out: &Vec<T>| match rule_index(s) {
                Some(j) => out[j].clone(),
                None => leaf(s as u8),
            };
            let mut acc = get(rhs[0], &out);
            for &s in &rhs[1..] {
                acc = join(&acc, &get(s, &out));
            }
            out.push(acc);
        }
        out
    }

    /// Expansion length of every rule, saturating at `u64::MAX`.
    pub fn lengths(&self) -> Vec<u64> {
        self.fold(|_| 1u64, |a, b| a.saturating_add(*b))
    }

    pub fn text_len(&self) -> u64 {
        *self.lengths().last().unwrap()
    }

    /// Expands the axiom, refusing outputs longer than `cap` bytes.
    pub fn decompress(&self, cap: u64) -> Result<Vec<u8>> {
        let len = self.text_len();
        if len > cap {
            return Err(Error::OutputCap { cap });
        }
        let mut out = Vec::with_capacity(len as usize);
        let mut stack: Vec<Symbol> = self.axiom().iter().rev().copied().collect();
        while let Some(s) = stack.pop() {
            match rule_index(s) {
                Some(j) => stack.extend(self.rules[j].iter().rev()),
                None => out.push(s as u8),
            }
        }
        Ok(out)
    }

    /// Serialises to the `SLP1` binary layout.
    pub fn to_bytes(&self) -> Vec<u8> {
        let axiom = self.axiom();
        let mut out = Vec::with_capacity(12 + 4 * self.size());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.rules.len() as u32).to_le_bytes());
        out.extend_from_slice(&(axiom.len() as u32).to_le_bytes());
        for rhs in &self.rules {
            for &s in rhs {
                out.extend_from_slice(&s.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Slp> {
        let word = |at: usize| -> Result<u32> {
            bytes
                .get(at..at + 4)
                .map(|b| u32::from_le_bytes(b.try_into().unwrap()))
                .ok_or_else(|| Error::parse(at.min(bytes.len()), "truncated SLP file"))
        };
        if bytes.get(..4) != Some(MAGIC) {
            return Err(Error::parse(0, "missing SLP1 magic"));
        }
        let t = word(4)? as usize;
        let k = word(8)? as usize;
        if t == 0 {
            return Err(Error::parse(4, "rule count must be positive"));
        }
        let expected = (t - 1).checked_mul(2).and_then(|x| x.checked_add(k)).and_then(|x| x.checked_mul(4));
        if expected.and_then(|e| e.checked_add(12)) != Some(bytes.len()) {
            let at = 12 + expected.unwrap_or(usize::MAX).min(bytes.len().saturating_sub(12));
            return Err(Error::parse(at.min(bytes.len()), "file length does not match the header"));
        }
        let mut pos = 12;
        let mut rules = Vec::with_capacity(t);
        for i in 0..t {
            let arity = if i + 1 == t { k } else { 2 };
            let mut rhs = Vec::with_capacity(arity);
            for _ in 0..arity {
                let s = word(pos)?;
                if s == 256 || rule_index(s).is_some_and(|j| j >= i) {
                    return Err(Error::parse(pos, format!("symbol {s} refers to an undefined rule")));
                }
                rhs.push(s);
                pos += 4;
            }
            rules.push(rhs);
        }
        Slp::new(rules).map_err(|e| Error::parse(12, e.to_string()))
    }

    /// Text layout: one `rule A B` line per binary rule, then `axiom ...`.
    /// Rules are referred to as `X1`, `X2`, …; bytes as in the automaton formats.
    pub fn to_text(&self) -> String {
        let sym = |s: Symbol| match rule_index(s) {
            Some(j) => format!("X{}", j + 1),
            None => format_symbol(s as u8),
        };
        let mut out = String::new();
        for (i, rhs) in self.rules.iter().enumerate() {
            let head = if i + 1 == self.rules.len() { "axiom" } else { "rule" };
            let body: Vec<String> = rhs.iter().map(|&s| sym(s)).collect();
            out += &format!("{head} {}\n", body.join(" "));
        }
        out
    }

    pub fn parse_text(src: &str) -> Result<Slp> {
        let mut rules: Vec<Vec<Symbol>> = Vec::new();
        let mut axiom_seen = false;
        for (off, line) in lines(src) {
            let toks = tokenize(line, off)?;
            let Some(head) = toks.first() else { continue };
            if axiom_seen {
                return Err(Error::parse(head.offset, "nothing may follow the axiom"));
            }
            let defined = rules.len();
            let sym = |t: &Token| -> Result<Symbol> {
                match t.text.strip_prefix('X') {
                    Some(num) => {
                        let i: usize = num.parse().map_err(|_| Error::parse(t.offset, "bad rule reference"))?;
                        if i == 0 || i > defined {
                            return Err(Error::parse(t.offset, format!("rule X{i} is not defined yet")));
                        }
                        Ok(rule_symbol(i - 1))
                    }
                    None => parse_symbol(t).map(Symbol::from),
                }
            };
            match head.text {
                "rule" => {
                    expect_arity(&toks, 3, off)?;
                    rules.push(vec![sym(&toks[1])?, sym(&toks[2])?]);
                }
                "axiom" => {
                    if toks.len() < 3 {
                        return Err(Error::parse(head.offset, "the axiom needs at least two symbols"));
                    }
                    rules.push(toks[1..].iter().map(sym).collect::<Result<_>>()?);
                    axiom_seen = true;
                }
                other => return Err(Error::parse(head.offset, format!("unknown directive {other:?}"))),
            }
        }
        if !axiom_seen {
            return Err(Error::parse(src.len(), "missing `axiom` line"));
        }
        Slp::new(rules).map_err(|e| Error::parse(0, e.to_string()))
    }

    /// Accepts either layout, telling them apart by the magic bytes.
    pub fn load(bytes: &[u8]) -> Result<Slp> {
        if bytes.starts_with(MAGIC) {
            Slp::from_bytes(bytes)
        } else {
            let text = std::str::from_utf8(bytes)
                .map_err(|e| Error::parse(e.valid_up_to(), "SLP text must be UTF-8"))?;
            Slp::parse_text(text)
        }
    }
}

/// RePair-style compression: while some adjacent pair occurs at least twice
/// (counting non-overlapping occurrences), replace a most frequent one by a
/// fresh rule. Ties go to the numerically least pair. What remains becomes the axiom.
pub fn repair_compress(text: &[u8]) -> Result<Slp> {
    if text.len() < 2 {
        return Err(Error::invalid("RePair needs at least two bytes of input"));
    }
    let mut seq: Vec<Symbol> = text.iter().map(|&b| Symbol::from(b)).collect();
    let mut rules: Vec<Vec<Symbol>> = Vec::new();
    loop {
        let mut freq: HashMap<(Symbol, Symbol), (usize, usize)> = HashMap::new();
        for i in 0..seq.len() - 1 {
            let e = freq.entry((seq[i], seq[i + 1])).or_insert((0, usize::MAX));
            // A run like `aaa` holds one non-overlapping `aa`.
            if e.1 != usize::MAX && e.1 + 1 == i && seq[i] == seq[i + 1] {
                continue;
            }
            *e = (e.0 + 1, i);
        }
        let best = freq
            .into_iter()
            .filter(|(_, (c, _))| *c >= 2)
            .max_by(|(p, (c, _)), (q, (d, _))| c.cmp(d).then_with(|| q.cmp(p)));
        let Some(((x, y), _)) = best else { break };
        let fresh = rule_symbol(rules.len());
        rules.push(vec![x, y]);
        let mut out = Vec::with_capacity(seq.len());
        let mut i = 0;
        while i < seq.len() {
            if i + 1 < seq.len() && seq[i] == x && seq[i + 1] == y {
                out.push(fresh);
                i += 2;
            } else {
                out.push(seq[i]);
                i += 1;
            }
        }
        // Two or more occurrences were replaced, so at least two symbols remain.
        seq = out;
    }
    rules.push(seq);
    Slp::new(rules)
}
