use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: expected n = {expected}, got n = {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("cannot lift from conductor {from} to conductor {to}")]
    Conductor { from: u64, to: u64 },

    #[error("not a physical invariant: {0}")]
    NotPhysical(String),

    #[error("series division needs a leading coefficient of +-1, found {0}")]
    NonUnitLeading(String),

    #[error("non-convergent evaluation point: {0}")]
    NonConvergent(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
