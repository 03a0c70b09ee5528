//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A quantity left the representable range of `f64` (for instance
    /// `cosh` of a huge argument). Callers that tabulate results should
    /// mark the row rather than emit float specials.
    #[error("numeric overflow: {0}")]
    Overflow(String),
    #[error("profile radius is negative at Z = {z}: R = {r}")]
    NegativeRadius { z: f64, r: f64 },
    /// Principal curvatures degenerate where the surface meets the axis.
    #[error("curvature undefined at z = {z}: radius vanishes")]
    UndefinedCurvature { z: f64 },
    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn overflow(msg: impl Into<String>) -> Self {
        Error::Overflow(msg.into())
    }
}
