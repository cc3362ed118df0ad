use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed arguments: non-prime characteristic, zero degree, mismatched rings.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// Well-formed arguments outside the supported family of instances.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    /// Two routes that must agree did not; indicates a bug rather than bad input.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("no representation of {p}^{k} with the required normalization")]
    NoRepresentation { p: u64, k: u32 },
    #[error("{count} normalized representations of {p}^{k}, expected exactly one")]
    UniquenessViolation { p: u64, k: u32, count: usize },
    #[error("e = {e} is not semiprimitive for p = {p}, s = {s}")]
    NotSemiprimitive { p: u64, s: u32, e: u64 },
    #[error("no closed form available: {0}")]
    Unsupported(String),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn instance(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::Inconsistency(msg.into())
    }
}
