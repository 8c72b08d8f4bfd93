use thiserror::Error;

use crate::connectives::TNormKind;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the unit interval")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid isomorphism `{name}`: {reason}")]
    InvalidIsomorphism { name: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for universe of size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix is not symmetric positive-definite")]
    NotPositiveDefinite,

    #[error("non-residuated triplet: the {0} t-norm is not left-continuous")]
    NonResiduated(TNormKind),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("granule orientation mismatch: {0}")]
    OrientationMismatch(&'static str),

    #[error(
        "brute-force search too large: {points} grid points per coordinate over {n} instances"
    )]
    SizeGuard { n: usize, points: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
