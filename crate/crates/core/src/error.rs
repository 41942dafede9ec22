use thiserror::Error;

/// Errors produced by space parsing, validation, and the geometry routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("space has no domains")]
    EmptySpace,

    #[error("domain `{0}` has no dimensions")]
    EmptyDomain(String),

    #[error("duplicate domain name `{0}`")]
    DuplicateDomain(String),

    #[error("duplicate dimension name `{0}`")]
    DuplicateDimension(String),

    #[error("unknown domain `{0}`")]
    UnknownDomain(String),

    #[error("weight for {kind} `{name}` must be positive, got {value}")]
    NonpositiveWeight {
        kind: &'static str,
        name: String,
        value: f64,
    },

    #[error("weights do not cover the space: {0}")]
    WeightCoverage(String),

    #[error("dimension weights in domain `{domain}` sum to {actual} != 1 (residual {residual:e})")]
    DimensionWeightSum {
        domain: String,
        actual: f64,
        residual: f64,
    },

    #[error("domain weights sum to {actual} != {expected} (residual {residual:e})")]
    DomainWeightSum {
        expected: f64,
        actual: f64,
        residual: f64,
    },

    #[error("point has {actual} coordinates, space has {expected} dimensions")]
    PointLength { expected: usize, actual: usize },

    #[error("point coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
