use thiserror::Error;

/// Errors raised by path construction, the variation functionals and the
/// integration routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("path must contain at least one sample")]
    EmptyPath,
    #[error("times and values have different lengths ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
    #[error("times must be strictly increasing (index {index})")]
    NonIncreasingTimes { index: usize },
    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },
    #[error("inconsistent dimension at sample {index}: expected {expected}, found {found}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("path has {len} samples; brute-force enumeration supports at most {max}")]
    PathTooLarge { len: usize, max: usize },
    #[error("phi(0) = {0} but an admissible weight must vanish at 0")]
    PhiNotZeroAtOrigin(f64),
    #[error("phi is not nondecreasing near x = {0}")]
    PhiNotMonotone(f64),
    #[error("time change leaves the sample range at t = {0}")]
    TimeChangeOutOfRange(f64),
    #[error("integrand and integrator jump at the same time t = {0}")]
    CommonJump(f64),
    #[error("integrand and integrator are defined on different intervals")]
    DomainMismatch,
    #[error("tag {index} lies outside its partition cell")]
    TagOutsideCell { index: usize },
    #[error("partition must be strictly increasing inside the domain")]
    BadPartition,
    #[error("refinement did not converge after {levels} levels (last gap {gap:e})")]
    NoConvergence { levels: u32, gap: f64 },
    #[error("1/p + 1/q must exceed 1 (p = {p}, q = {q})")]
    ExponentConstraint { p: f64, q: f64 },
    #[error("series did not reach the requested tolerance within {terms} terms")]
    SeriesNotConverged { terms: usize },
    #[error("sequence `{0}` must be positive and nonincreasing")]
    BadSequence(&'static str),
    #[error("{0}")]
    Io(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
