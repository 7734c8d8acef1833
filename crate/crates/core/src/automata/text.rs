//! Line-oriented text formats for automata, grammars and one-counter nets.
//!
//! ```text
//! states 2
//! alphabet 'a' 'b'
//! initial 0
//! final 1
//! trans 0 'a' 1
//! ```
//!
//! Symbols are decimal byte values or single quoted characters (`'a'`,
//! `'\n'`, `'\x41'`). `#` starts a comment.

use super::{CnfGrammar, Nfa, Ocn};
use crate::{Error, Result};

pub(crate) struct Token<'a> {
    pub(crate) text: &'a str,
    pub(crate) offset: usize,
}

/// Splits a line into tokens, keeping quoted symbols (which may contain spaces) whole.
pub(crate) fn tokenize(line: &str, base: usize) -> Result<Vec<Token<'_>>> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'\r' => i += 1,
            b'#' => break,
            b'\'' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i] != b'\'' {
                    if bytes[i] == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
                if i >= bytes.len() {
                    return Err(Error::parse(base + start, "unterminated quoted symbol"));
                }
                i += 1;
                out.push(Token { text: &line[start..i], offset: base + start });
            }
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b' ' | b'\t' | b'\r' | b'#') {
                    i += 1;
                }
                out.push(Token { text: &line[start..i], offset: base + start });
            }
        }
    }
    Ok(out)
}

pub(crate) fn parse_symbol(t: &Token) -> Result<u8> {
    let s = t.text;
    if let Some(inner) = s.strip_prefix('\'').and_then(|r| r.strip_suffix('\'')) {
        let b = inner.as_bytes();
        return match b {
            [c] if *c != b'\\' => Ok(*c),
            [b'\\', b'n'] => Ok(b'\n'),
            [b'\\', b't'] => Ok(b'\t'),
            [b'\\', b'r'] => Ok(b'\r'),
            [b'\\', b'0'] => Ok(0),
            [b'\\', b'\\'] => Ok(b'\\'),
            [b'\\', b'\''] => Ok(b'\''),
            [b'\\', b'x', h1, h2] => u8::from_str_radix(std::str::from_utf8(&[*h1, *h2]).unwrap(), 16)
                .map_err(|_| Error::parse(t.offset, "bad hex escape")),
            _ => Err(Error::parse(t.offset, format!("bad quoted symbol {s}"))),
        };
    }
    s.parse::<u8>().map_err(|_| Error::parse(t.offset, format!("expected a byte symbol, found {s:?}")))
}

fn parse_index(t: &Token, bound: Option<usize>, what: &str) -> Result<usize> {
    let s = t.text.strip_prefix('X').unwrap_or(t.text);
    let v = s.parse::<usize>().map_err(|_| Error::parse(t.offset, format!("expected {what}, found {:?}", t.text)))?;
    if let Some(b) = bound {
        if v >= b {
            return Err(Error::parse(t.offset, format!("{what} {v} out of range (< {b})")));
        }
    }
    Ok(v)
}

/// Formats a symbol the way the parsers read it back.
pub fn format_symbol(a: u8) -> String {
    if a.is_ascii_alphanumeric() || (a.is_ascii_punctuation() && a != b'\'' && a != b'\\' && a != b'#') {
        format!("'{}'", a as char)
    } else {
        a.to_string()
    }
}

pub(crate) fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    src.split('\n').map(move |l| {
        let o = offset;
        offset += l.len() + 1;
        (o, l)
    })
}

pub(crate) fn expect_arity(toks: &[Token], n: usize, line_offset: usize) -> Result<()> {
    if toks.len() != n {
        let off = toks.get(n).map_or(line_offset, |t| t.offset);
        return Err(Error::parse(off, format!("`{}` expects {} argument(s)", toks[0].text, n - 1)));
    }
    Ok(())
}

fn missing_header(_src: &str) -> Error {
    Error::parse(0, "missing `states N` / `vars N` header")
}

/// Parses the NFA text format.
pub fn parse_nfa(src: &str) -> Result<Nfa> {
    let mut nfa: Option<Nfa> = None;
    for (off, line) in lines(src) {
        let toks = tokenize(line, off)?;
        let Some(head) = toks.first() else { continue };
        if head.text == "states" {
            expect_arity(&toks, 2, off)?;
            if nfa.is_some() {
                return Err(Error::parse(head.offset, "duplicate `states` line"));
            }
            nfa = Some(Nfa::new(parse_index(&toks[1], None, "a state count")?));
            continue;
        }
        let n = nfa.as_mut().ok_or_else(|| Error::parse(head.offset, "`states N` must come first"))?;
        let bound = Some(n.state_count());
        match head.text {
            "alphabet" => {
                for t in &toks[1..] {
                    n.add_symbol(parse_symbol(t)?);
                }
            }
            "initial" => {
                for t in &toks[1..] {
                    n.set_initial(parse_index(t, bound, "a state")?);
                }
            }
            "final" => {
                for t in &toks[1..] {
                    n.set_final(parse_index(t, bound, "a state")?);
                }
            }
            "trans" => {
                expect_arity(&toks, 4, off)?;
                let p = parse_index(&toks[1], bound, "a state")?;
                let a = parse_symbol(&toks[2])?;
                let q = parse_index(&toks[3], bound, "a state")?;
                n.add_transition(p, a, q);
            }
            other => return Err(Error::parse(head.offset, format!("unknown directive {other:?}"))),
        }
    }
    nfa.ok_or_else(|| missing_header(src))
}

pub fn format_nfa(n: &Nfa) -> String {
    let mut s = format!("states {}\n", n.state_count());
    let syms: Vec<String> = n.alphabet().iter().map(|&a| format_symbol(a)).collect();
    s += &format!("alphabet {}\n", syms.join(" "));
    let init: Vec<String> = n.initial().ones().map(|q| q.to_string()).collect();
    s += &format!("initial {}\n", init.join(" "));
    let fin: Vec<String> = n.finals().ones().map(|q| q.to_string()).collect();
    s += &format!("final {}\n", fin.join(" "));
    for (p, a, q) in n.transitions() {
        s += &format!("trans {p} {} {q}\n", format_symbol(a));
    }
    s
}

/// Parses the CNF grammar text format (`vars N`, `term Xi a`, `bin Xi Xj Xk`, `eps`).
pub fn parse_cnf(src: &str) -> Result<CnfGrammar> {
    let mut vars: Option<usize> = None;
    let mut terms = Vec::new();
    let mut bins = Vec::new();
    let mut eps = false;
    for (off, line) in lines(src) {
        let toks = tokenize(line, off)?;
        let Some(head) = toks.first() else { continue };
        if head.text == "vars" {
            expect_arity(&toks, 2, off)?;
            vars = Some(parse_index(&toks[1], None, "a variable count")?);
            continue;
        }
        let v = vars.ok_or_else(|| Error::parse(head.offset, "`vars N` must come first"))?;
        match head.text {
            "term" => {
                expect_arity(&toks, 3, off)?;
                terms.push((parse_index(&toks[1], Some(v), "a variable")?, parse_symbol(&toks[2])?));
            }
            "bin" => {
                expect_arity(&toks, 4, off)?;
                bins.push((
                    parse_index(&toks[1], Some(v), "a variable")?,
                    parse_index(&toks[2], Some(v), "a variable")?,
                    parse_index(&toks[3], Some(v), "a variable")?,
                ));
            }
            "eps" => {
                expect_arity(&toks, 1, off)?;
                eps = true;
            }
            other => return Err(Error::parse(head.offset, format!("unknown directive {other:?}"))),
        }
    }
    let v = vars.ok_or_else(|| missing_header(src))?;
    CnfGrammar::new(v, &terms, &bins, eps).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn format_cnf(g: &CnfGrammar) -> String {
    let mut s = format!("vars {}\n", g.variable_count());
    if g.has_epsilon() {
        s += "eps\n";
    }
    for x in 0..g.variable_count() {
        for &a in g.terminal_rules(x) {
            s += &format!("term X{x} {}\n", format_symbol(a));
        }
        for &(y, z) in g.binary_rules(x) {
            s += &format!("bin X{x} X{y} X{z}\n");
        }
    }
    s
}

/// Parses the OCN text format (`states N`, `trans p a d q`).
pub fn parse_ocn(src: &str) -> Result<Ocn> {
    let mut ocn: Option<Ocn> = None;
    for (off, line) in lines(src) {
        let toks = tokenize(line, off)?;
        let Some(head) = toks.first() else { continue };
        match head.text {
            "states" => {
                expect_arity(&toks, 2, off)?;
                ocn = Some(Ocn::new(parse_index(&toks[1], None, "a state count")?, &[])?);
            }
            "trans" => {
                let o = ocn.as_mut().ok_or_else(|| Error::parse(head.offset, "`states N` must come first"))?;
                expect_arity(&toks, 5, off)?;
                let bound = Some(o.state_count());
                let p = parse_index(&toks[1], bound, "a state")?;
                let a = parse_symbol(&toks[2])?;
                let d: i8 = match toks[3].text {
                    "-1" => -1,
                    "0" => 0,
                    "+1" | "1" => 1,
                    _ => return Err(Error::parse(toks[3].offset, "counter delta must be -1, 0 or +1")),
                };
                let q = parse_index(&toks[4], bound, "a state")?;
                o.add_transition((p, a, d, q)).map_err(|e| Error::parse(head.offset, e.to_string()))?;
            }
            other => return Err(Error::parse(head.offset, format!("unknown directive {other:?}"))),
        }
    }
    ocn.ok_or_else(|| missing_header(src))
}
