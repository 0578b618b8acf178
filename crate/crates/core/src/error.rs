use thiserror::Error;

use crate::distances::DistanceInterval;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A construction would exceed the ambient dimension cap.
    #[error("dimension {dim} exceeds the ambient cap {cap}")]
    Size { dim: usize, cap: usize },

    /// Malformed arguments: bad labels, mismatched shapes, out-of-range parameters.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An input violated a documented mathematical precondition
    /// (non-Hermitian operator, non-trace-preserving Kraus set, ...).
    #[error("contract violated: {0}")]
    Contract(String),

    /// An iterative solver hit its iteration cap before certifying its result.
    #[error("solver did not converge after {iterations} iterations; best interval [{}, {}]", best.lower, best.upper)]
    NotConverged {
        iterations: usize,
        best: DistanceInterval,
    },

    /// Input file could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}
