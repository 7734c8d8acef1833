//! Regular-expression search on grammar-compressed text.

mod count;
mod homogeneous;
mod regex;
mod slp;

pub use count::{
    combine_counting, contains_factor, count_lines, prune_for_lines, report_lines, scan_lines, slp_match_exists,
    CountingInfo, LineSearch, SearchStats,
};
pub use homogeneous::{homogeneous_dfa, homogeneous_kind, HomogeneousKind};
pub use regex::{compile_pattern, compile_regex, parse_regex, position_automaton, ByteSet, Regex};
pub use slp::{repair_compress, rule_index, rule_symbol, Slp, Symbol, FIRST_RULE};

/// Pattern automaton for a search: the homogeneous DFA when the pattern has
/// a `+` or `|` shape, the position automaton otherwise.
pub fn search_automaton(ast: &Regex) -> crate::Result<crate::Nfa> {
    if ast.nullable() {
        return Err(crate::Error::EmptyMatch);
    }
    match homogeneous_kind(ast) {
        Some(kind @ (HomogeneousKind::Plus | HomogeneousKind::Alt)) => {
            Ok(homogeneous_dfa(ast, kind).expect("kind was just classified").to_nfa())
        }
        _ => compile_regex(ast),
    }
}

#[cfg(test)]
mod tests;
