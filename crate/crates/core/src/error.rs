//! Error type shared by all modules.

/// Errors raised by generators, bootstrap operations and experiments.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A requested series length is too small for the operation.
    #[error("invalid length: need at least {min} observations, got {got}")]
    InvalidLength { min: usize, got: usize },

    /// A generator parameter violates its stationarity region.
    #[error("nonstationary parameter: {0}")]
    NonstationaryParameter(String),

    /// A Volterra coefficient table entry is not admissible.
    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    /// A statistic needs more observations than the sample provides.
    #[error("insufficient sample: need at least {min} observations, got {got}")]
    InsufficientSample { min: usize, got: usize },

    /// Block length and series length are incompatible.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// An exact computation would exceed its enumeration budget.
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),

    /// An empirical CDF cannot be built from an empty sample.
    #[error("invalid cdf: empty sample")]
    EmptyCdf,

    /// Any other argument violation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
