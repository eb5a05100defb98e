use thiserror::Error;

/// Errors raised by the neighbor-net toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("taxon index {index} out of range for {n} taxa")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("at least {min} taxa required, got {n}")]
    TooFewTaxa { n: usize, min: usize },

    #[error("taxon count mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("invalid dissimilarity map: {0}")]
    InvalidDissimilarity(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid split system: {0}")]
    InvalidSplitSystem(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("invalid weighting: {0}")]
    InvalidWeighting(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration of {count} orderings exceeds cap {cap}")]
    CapExceeded { count: String, cap: usize },

    #[error("no circular ordering is consistent with the split system")]
    NoConsistentOrdering,

    #[error("solver did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
