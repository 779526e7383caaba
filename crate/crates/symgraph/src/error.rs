use thiserror::Error;

/// Errors shared across the engine and the algorithm layers.
///
/// `Parse` is the only variant produced while reading input text; everything
/// else reports a violated call contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("universe mismatch: expected {expected} vertices, found {found}")]
    UniverseMismatch { expected: usize, found: usize },

    #[error("vertex {vertex} out of range for universe of size {universe}")]
    VertexOutOfRange { vertex: usize, universe: usize },

    #[error("empty pick")]
    EmptyPick,

    #[error("empty source")]
    EmptySource,

    #[error("vertex {vertex} lies outside the search domain")]
    VertexOutsideDomain { vertex: usize },

    #[error("divisibility violated: k = {k} is not ell * kbar = {ell} * {kbar}")]
    Divisibility { k: usize, ell: usize, kbar: usize },

    #[error("instance size {k} is not a perfect square")]
    NonSquare { k: usize },

    #[error("requires strong connectivity")]
    NotStronglyConnected,

    #[error("unsupported combination: {reduction} with {algorithm}")]
    UnsupportedCombination {
        reduction: &'static str,
        algorithm: &'static str,
    },

    #[error("invalid parameter {name}: {message}")]
    InvalidParameter {
        name: &'static str,
        message: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// True for errors caused by malformed input text rather than a broken
    /// call contract. The CLI maps these to a distinct exit code.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
