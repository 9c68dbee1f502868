use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("operator is singular (smallest singular value {0:e})")]
    SingularOperator(f64),

    #[error("invalid pivot party {pivot} for a {parties}-party state")]
    InvalidPivot { pivot: usize, parties: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("wrong amplitude count: expected {expected}, found {found}")]
    WrongAmplitudeCount { expected: usize, found: usize },

    #[error("malformed state file: {0}")]
    Parse(String),

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("family {family} has {count} variants, variant {variant} requested")]
    InvalidVariant {
        family: String,
        variant: usize,
        count: usize,
    },

    #[error("family {0} needs product-state parameters")]
    MissingParameters(String),

    #[error("family {0} takes no parameters")]
    UnexpectedParameters(String),

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("class count defined for 2 <= n <= 20, got n = {0}")]
    CountOutOfRange(u64),

    #[error("condition bound must be at least 1, got {0}")]
    InvalidConditionBound(f64),

    #[error("no operator met condition bound {bound} after {tries} draws")]
    RetryLimit { bound: f64, tries: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
