use thiserror::Error;

/// Errors produced by graph construction and the solver stages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KcutError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("instance too large: n = {n} exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("operation requires a simple graph")]
    NotSimple,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A solver postcondition failed; indicates a bug rather than bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, KcutError>;
