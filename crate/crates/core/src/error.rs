use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable context mismatch: {0}")]
    ContextMismatch(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("{path}:{line}: {message}")]
    File {
        path: String,
        line: usize,
        message: String,
    },

    #[error("element is not central: {0}")]
    NotCentral(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("spin must be a non-negative half-integer, got {0}")]
    NotHalfInteger(String),

    #[error("representation does not descend to the quotient: {0}")]
    DescentFailure(String),

    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
