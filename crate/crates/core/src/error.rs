use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid operator parameters: sigma = {sigma}, n = {n} (need sigma - (n - 1) > 0)")]
    InvalidParams { sigma: f64, n: i64 },

    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(f64),

    #[error("radius {0} must lie in (0, 1)")]
    InvalidRadius(f64),

    #[error("beta = {0} must lie in [0, 1)")]
    InvalidBeta(f64),

    #[error("convex weights must be nonnegative and sum to 1 (got {0} and {1})")]
    InvalidWeights(f64, f64),

    #[error("invalid Herglotz mixture: {0}")]
    InvalidMixture(String),

    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },

    #[error("series of order {order} needs {} coefficients, got {len}", order + 1)]
    LengthMismatch { order: usize, len: usize },

    #[error("series is not normalized: {0}")]
    NotNormalized(String),

    #[error("Bernardi parameter c = {0} must satisfy c + 1 > 0")]
    InvalidBernardi(f64),

    #[error("the integral transform is not evaluated at z = 0")]
    ZeroPoint,

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadrature(String),

    #[error("invalid circle grid: {0}")]
    InvalidGrid(String),

    #[error("covering constant needs n >= 1 (the alternating series diverges for n = 0)")]
    DivergentCovering,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid list `{0}`")]
    InvalidList(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
