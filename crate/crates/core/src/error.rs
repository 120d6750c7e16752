use thiserror::Error;

/// Errors produced by construction, validation and solver entry points.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("scaling argument must be nonnegative, got {0}")]
    NegativeArgument(f64),

    #[error(
        "exponent {0} is not in (0, 1]: t^{0} is not subadditive \
         (at t1 = t2 = 1, (1+1)^{0} = {doubled} > 2 = 1^{0} + 1^{0})",
        doubled = 2f64.powf(*.0)
    )]
    InvalidExponent(f64),

    #[error("candidate list is empty")]
    EmptyCandidates,

    #[error("point set of size {size} exceeds the configured cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("start point is not a member of the point set")]
    StartNotInSet,

    #[error("start point has unbounded gauge value: outside the solver domain")]
    StartOutsideDomain,

    #[error("potential is not decreasing along the order: {0}")]
    PotentialNotDecreasing(String),

    #[error("iteration cap {0} exceeded: slack schedule too loose")]
    IterationCap(usize),

    #[error("sequence is not ascending: pair ({0}, {1}) violates the order")]
    NotAscending(usize, usize),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("gauge context not validated against its cones")]
    UnvalidatedContext,
}

pub type Result<T> = std::result::Result<T, Error>;
