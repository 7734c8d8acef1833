//! A small regular-expression dialect over bytes.
//!
//! Alternation `|` binds loosest, then concatenation, then the postfix
//! operators `*`, `+`, `?`, `{m}` and `{m,n}`. Atoms are literal bytes,
//! `\`-escapes, `.`, bracket classes `[...]` (ranges, leading `^`) and
//! parenthesised groups. `.` and negated classes never match a newline.

use crate::automata::Nfa;
use crate::{Error, Result};

const NEWLINE: u8 = b'\n';

/// A set of bytes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ByteSet([u64; 4]);

impl ByteSet {
    pub fn empty() -> Self {
        ByteSet([0; 4])
    }

    pub fn single(b: u8) -> Self {
        let mut s = Self::empty();
        s.insert(b);
        s
    }

    pub fn insert(&mut self, b: u8) {
        self.0[(b >> 6) as usize] |= 1 << (b & 63);
    }

    pub fn remove(&mut self, b: u8) {
        self.0[(b >> 6) as usize] &= !(1 << (b & 63));
    }

    pub fn contains(&self, b: u8) -> bool {
        self.0[(b >> 6) as usize] >> (b & 63) & 1 == 1
    }

    pub fn complement(&self) -> Self {
        ByteSet([!self.0[0], !self.0[1], !self.0[2], !self.0[3]])
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=255u8).filter(move |&b| self.contains(b))
    }
}

impl std::fmt::Debug for ByteSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter().map(|b| b as char)).finish()
    }
}

/// Regular-expression syntax tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Literal(u8),
    Class(ByteSet),
    /// `.`: any byte but newline.
    Any,
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Optional(Box<Regex>),
    Repeat { inner: Box<Regex>, min: u32, max: u32 },
    Group(Box<Regex>),
}

impl Regex {
    /// Whether the empty word belongs to the denotation.
    pub fn nullable(&self) -> bool {
        match self {
            Regex::Literal(_) | Regex::Class(_) | Regex::Any => false,
            Regex::Concat(xs) => xs.iter().all(Regex::nullable),
            Regex::Alt(xs) => xs.iter().any(Regex::nullable),
            Regex::Star(_) | Regex::Optional(_) => true,
            Regex::Plus(r) | Regex::Group(r) => r.nullable(),
            Regex::Repeat { inner, min, .. } => *min == 0 || inner.nullable(),
        }
    }

    /// Number of leaves of the tree (before repetition expansion).
    pub fn leaf_count(&self) -> usize {
        match self {
            Regex::Literal(_) | Regex::Class(_) | Regex::Any => 1,
            Regex::Concat(xs) | Regex::Alt(xs) => xs.iter().map(Regex::leaf_count).sum(),
            Regex::Star(r) | Regex::Plus(r) | Regex::Optional(r) | Regex::Group(r) => r.leaf_count(),
            Regex::Repeat { inner, .. } => inner.leaf_count(),
        }
    }

    /// The bytes a leaf can read. Newline only survives when spelled out.
    fn leaf_bytes(&self) -> ByteSet {
        match self {
            Regex::Literal(b) => ByteSet::single(*b),
            Regex::Class(s) => *s,
            Regex::Any => {
                let mut s = ByteSet::empty().complement();
                s.remove(NEWLINE);
                s
            }
            _ => unreachable!("not a leaf"),
        }
    }
}

/// Upper bound on positions after expanding bounded repetitions.
const MAX_POSITIONS: usize = 1 << 16;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse_regex(text: &str) -> Result<Regex> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let r = p.alternation()?;
    if p.pos < p.src.len() {
        return Err(Error::parse(p.pos, "unmatched `)`"));
    }
    Ok(r)
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn alternation(&mut self) -> Result<Regex> {
        let mut branches = vec![self.concatenation()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            branches.push(self.concatenation()?);
        }
        Ok(if branches.len() == 1 { branches.pop().unwrap() } else { Regex::Alt(branches) })
    }

    fn concatenation(&mut self) -> Result<Regex> {
        let start = self.pos;
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == b'|' || c == b')' {
                break;
            }
            items.push(self.repetition()?);
        }
        match items.len() {
            0 => Err(Error::parse(start, "empty alternative")),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(Regex::Concat(items)),
        }
    }

    fn repetition(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        loop {
            r = match self.peek() {
                Some(b'*') => Regex::Star(Box::new(r)),
                Some(b'+') => Regex::Plus(Box::new(r)),
                Some(b'?') => Regex::Optional(Box::new(r)),
                Some(b'{') => {
                    let (min, max) = self.bounds()?;
                    r = Regex::Repeat { inner: Box::new(r), min, max };
                    continue;
                }
                _ => return Ok(r),
            };
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "expected a repetition count"))
    }

    fn bounds(&mut self) -> Result<(u32, u32)> {
        let open = self.pos;
        self.pos += 1;
        let min = self.number()?;
        let max = if self.peek() == Some(b',') {
            self.pos += 1;
            self.number()?
        } else {
            min
        };
        if self.peek() != Some(b'}') {
            return Err(Error::parse(self.pos, "expected `}`"));
        }
        self.pos += 1;
        if min > max {
            return Err(Error::parse(open, format!("repetition {{{min},{max}}} has min > max")));
        }
        Ok((min, max))
    }

    fn atom(&mut self) -> Result<Regex> {
        let start = self.pos;
        let c = self.peek().ok_or_else(|| Error::parse(start, "unexpected end of pattern"))?;
        self.pos += 1;
        match c {
            b'(' => {
                if self.peek().is_none() {
                    return Err(Error::parse(start, "unbalanced `(`"));
                }
                let inner = self.alternation()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(start, "unbalanced `(`"));
                }
                self.pos += 1;
                Ok(Regex::Group(Box::new(inner)))
            }
            b'[' => self.class(start),
            b'.' => Ok(Regex::Any),
            b'\\' => self.escape(start),
            b'*' | b'+' | b'?' | b'{' => Err(Error::parse(start, format!("`{}` has nothing to repeat", c as char))),
            _ => Ok(Regex::Literal(c)),
        }
    }

    fn escape(&mut self, start: usize) -> Result<Regex> {
        let c = self.peek().ok_or_else(|| Error::parse(start, "dangling `\\`"))?;
        self.pos += 1;
        let class = |pred: fn(u8) -> bool| {
            let mut s = ByteSet::empty();
            (0..=255u8).filter(|&b| pred(b)).for_each(|b| s.insert(b));
            Regex::Class(s)
        };
        Ok(match c {
            b'n' => Regex::Literal(b'\n'),
            b't' => Regex::Literal(b'\t'),
            b'r' => Regex::Literal(b'\r'),
            b'x' => Regex::Literal(self.hex_byte(start)?),
            b'd' => class(|b| b.is_ascii_digit()),
            b'w' => class(|b| b.is_ascii_alphanumeric() || b == b'_'),
            b's' => class(|b| b == b' ' || b == b'\t' || b == b'\r'),
            c if c.is_ascii_alphanumeric() => return Err(Error::parse(start, format!("unknown escape `\\{}`", c as char))),
            c => Regex::Literal(c),
        })
    }

    fn hex_byte(&mut self, start: usize) -> Result<u8> {
        let digits = self.src.get(self.pos..self.pos + 2).ok_or_else(|| Error::parse(start, "short `\\x` escape"))?;
        let v = std::str::from_utf8(digits)
            .ok()
            .and_then(|s| u8::from_str_radix(s, 16).ok())
            .ok_or_else(|| Error::parse(start, "bad `\\x` escape"))?;
        self.pos += 2;
        Ok(v)
    }

    fn class_byte(&mut self, open: usize) -> Result<u8> {
        let c = self.peek().ok_or_else(|| Error::parse(open, "unterminated class"))?;
        let here = self.pos;
        self.pos += 1;
        if c != b'\\' {
            return Ok(c);
        }
        let e = self.peek().ok_or_else(|| Error::parse(open, "unterminated class"))?;
        self.pos += 1;
        Ok(match e {
            b'n' => b'\n',
            b't' => b'\t',
            b'r' => b'\r',
            b'x' => self.hex_byte(here)?,
            e if e.is_ascii_alphanumeric() => return Err(Error::parse(here, "unsupported escape in class")),
            e => e,
        })
    }

    fn class(&mut self, open: usize) -> Result<Regex> {
        let negated = self.peek() == Some(b'^');
        if negated {
            self.pos += 1;
        }
        let mut set = ByteSet::empty();
        let mut first = true;
        loop {
            match self.peek() {
                None => return Err(Error::parse(open, "unterminated class")),
                Some(b']') if !first => break,
                _ => {}
            }
            first = false;
            let lo = self.class_byte(open)?;
            if self.peek() == Some(b'-') && self.src.get(self.pos + 1).is_some_and(|&c| c != b']') {
                let dash = self.pos;
                self.pos += 1;
                let hi = self.class_byte(open)?;
                if lo > hi {
                    return Err(Error::parse(dash, "reversed class range"));
                }
                (lo..=hi).for_each(|b| set.insert(b));
            } else {
                set.insert(lo);
            }
        }
        self.pos += 1;
        if negated {
            set = set.complement();
            set.remove(NEWLINE);
        }
        if set.is_empty() {
            return Err(Error::parse(open, "class matches no byte"));
        }
        Ok(Regex::Class(set))
    }
}

/// Syntax tree with repetitions expanded, leaves numbered.
enum Core {
    Leaf(usize),
    Eps,
    Cat(Vec<Core>),
    Or(Vec<Core>),
    Many(Box<Core>),
    Some(Box<Core>),
}

struct Lowering {
    leaves: Vec<ByteSet>,
}

impl Lowering {
    fn lower(&mut self, r: &Regex) -> Result<Core> {
        if self.leaves.len() > MAX_POSITIONS {
            return Err(Error::invalid("pattern too large after expanding repetitions"));
        }
        Ok(match r {
            Regex::Literal(_) | Regex::Class(_) | Regex::Any => {
                self.leaves.push(r.leaf_bytes());
                Core::Leaf(self.leaves.len() - 1)
            }
            Regex::Concat(xs) => Core::Cat(xs.iter().map(|x| self.lower(x)).collect::<Result<_>>()?),
            Regex::Alt(xs) => Core::Or(xs.iter().map(|x| self.lower(x)).collect::<Result<_>>()?),
            Regex::Star(x) => Core::Many(Box::new(self.lower(x)?)),
            Regex::Plus(x) => Core::Some(Box::new(self.lower(x)?)),
            Regex::Optional(x) => Core::Or(vec![self.lower(x)?, Core::Eps]),
            Regex::Group(x) => self.lower(x)?,
            Regex::Repeat { inner, min, max } => {
                let mut parts = Vec::new();
                for _ in 0..*min {
                    parts.push(self.lower(inner)?);
                }
                for _ in *min..*max {
                    parts.push(Core::Or(vec![self.lower(inner)?, Core::Eps]));
                }
                if parts.is_empty() {
                    Core::Eps
                } else {
                    Core::Cat(parts)
                }
            }
        })
    }
}

/// Nullable, first and last position sets of a subtree; fills `follow` as a side effect.
fn glushkov(c: &Core, follow: &mut [Vec<usize>]) -> (bool, Vec<usize>, Vec<usize>) {
    match c {
        Core::Leaf(i) => (false, vec![*i], vec![*i]),
        Core::Eps => (true, vec![], vec![]),
        Core::Cat(xs) => {
            let (mut nullable, mut first, mut last): (bool, Vec<usize>, Vec<usize>) = (true, Vec::new(), Vec::new());
            for x in xs {
                let (n, f, l) = glushkov(x, follow);
                for &p in &last {
                    follow[p].extend_from_slice(&f);
                }
                if nullable {
                    first.extend_from_slice(&f);
                }
                if n {
                    last.extend(l);
                } else {
                    last = l;
                }
                nullable &= n;
            }
            (nullable, first, last)
        }
        Core::Or(xs) => {
            let (mut nullable, mut first, mut last) = (false, Vec::new(), Vec::new());
            for x in xs {
                let (n, f, l) = glushkov(x, follow);
                nullable |= n;
                first.extend(f);
                last.extend(l);
            }
            (nullable, first, last)
        }
        Core::Many(x) | Core::Some(x) => {
            let (n, f, l) = glushkov(x, follow);
            for &p in &l {
                follow[p].extend_from_slice(&f);
            }
            (n || matches!(c, Core::Many(_)), f, l)
        }
    }
}

/// Position automaton of `r` over the bytes other than newline. State 0 is
/// initial; state `i + 1` stands for leaf `i`. Nullable patterns make state 0 final.
pub fn position_automaton(r: &Regex) -> Result<Nfa> {
    let mut lw = Lowering { leaves: Vec::new() };
    let core = lw.lower(r)?;
    let mut follow: Vec<Vec<usize>> = vec![Vec::new(); lw.leaves.len()];
    let (nullable, first, last) = glushkov(&core, &mut follow);
    let mut n = Nfa::new(lw.leaves.len() + 1);
    n.set_initial(0);
    if nullable {
        n.set_final(0);
    }
    for p in last {
        n.set_final(p + 1);
    }
    let mut edges = |from: usize, to: &[usize]| {
        for &q in to {
            for b in lw.leaves[q].iter().filter(|&b| b != NEWLINE) {
                n.add_transition(from, b, q + 1);
            }
        }
    };
    edges(0, &first);
    for (p, fs) in follow.iter().enumerate() {
        edges(p + 1, fs);
    }
    Ok(n)
}

/// Compiles a pattern to an ε-free NFA over the non-newline bytes.
/// Patterns whose language contains the empty word are rejected.
pub fn compile_regex(r: &Regex) -> Result<Nfa> {
    if r.nullable() {
        return Err(Error::EmptyMatch);
    }
    position_automaton(r)
}

/// Parses and compiles in one go.
pub fn compile_pattern(text: &str) -> Result<Nfa> {
    compile_regex(&parse_regex(text)?)
}
