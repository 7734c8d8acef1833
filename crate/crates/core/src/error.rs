use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed textual or binary input; `offset` is a byte offset into the source.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A fixpoint iteration ran past its cap, which points at a non-terminating abstraction.
    #[error("iteration cap of {cap} exceeded")]
    IterationCap { cap: usize },

    /// A regular expression that accepts the empty word.
    #[error("pattern matches the empty string")]
    EmptyMatch,

    /// Decompression would produce more bytes than allowed.
    #[error("decompressed output exceeds the cap of {cap} bytes")]
    OutputCap { cap: u64 },

    /// Structurally invalid value handed to a constructor.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse { offset, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
