//! Quasiorder-driven algorithms over finite automata and grammars.
//!
//! The crate bundles three families of procedures that share one set of
//! automata types:
//!
//! * language inclusion checks (`inclusion`) for regular, context-free and
//!   one-counter-trace right-hand sides, built from the quasiorders in
//!   `quasiorder` and the Kleene/antichain driver in `fixpoint`;
//! * regular-expression search and line counting over grammar-compressed
//!   text (`slpsearch`);
//! * residual automata constructions and an active learner (`residual`).

pub mod automata;
pub mod error;
pub mod fixpoint;
pub mod inclusion;
pub mod quasiorder;
pub mod residual;
pub mod slpsearch;

pub use automata::{
    CnfGrammar, Dfa, Direction, Nfa, Ocn, StateSet, Verdict, Word,
};
pub use error::{Error, Result};
pub use fixpoint::{Antichain, Limits, DEFAULT_ITERATION_CAP};

#[cfg(test)]
pub(crate) mod fixtures;
