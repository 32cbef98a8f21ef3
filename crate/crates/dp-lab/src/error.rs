use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("center {center} too close to the domain boundary (need {clearance} units of tail clearance)")]
    BoundaryClearance { center: f64, clearance: f64 },
    #[error("no bump found: the profile never reaches the threshold level inside the window")]
    BumpAbsent,
    #[error("bump tracking lost: {0}")]
    TrackingLost(String),
    #[error("non-finite value produced at t = {0}")]
    NonFinite(f64),
    #[error("invalid config: {0}")]
    ConfigInvalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
