use thiserror::Error;

/// Errors produced by geometry evaluation and solution-family construction.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("metric is numerically singular at {point:?} (|det| = {det:e})")]
    SingularMetric { point: Vec<f64>, det: f64 },

    #[error("conformal factor vanishes at {point:?}")]
    VanishingConformalFactor { point: Vec<f64> },

    #[error("warping function is not positive at {point:?} (value {value})")]
    NonPositiveWarping { point: Vec<f64>, value: f64 },

    #[error("non-finite value encountered at {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("xi = {xi} lies outside the profile domain {domain}")]
    OutsideDomain { xi: f64, domain: String },

    #[error("direction vector must be nonzero")]
    ZeroDirection,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration blew up near xi = {xi}")]
    IntegrationBlowUp { xi: f64 },
}

pub type Result<T> = std::result::Result<T, GeomError>;
