use thiserror::Error;

/// Errors raised by the library. Every variant is either a violated
/// precondition (`Domain`-like), an exhausted resource, or an internal
/// consistency failure that indicates a bug.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("invalid fraction {p}/{q}: {reason}")]
    InvalidFraction { p: u64, q: u64, reason: &'static str },

    #[error("fractions {0} and {1} do not have tangent Ford circles")]
    NotTangent(String, String),

    #[error("consecutive fractions at index {index} and {} are not adjacent", index + 1)]
    NonAdjacentAt { index: usize },

    #[error("sequence is not strictly monotone at index {index}")]
    NotMonotone { index: usize },

    #[error("sequence violates the mediant property at index {index}")]
    MediantViolation { index: usize },

    #[error("sieve of size {limit} needs {bytes} bytes, over the budget of {budget} bytes")]
    SieveBudget { limit: u64, bytes: u64, budget: u64 },

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
