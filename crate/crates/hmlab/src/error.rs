//! Crate-wide error type.

/// Errors surfaced by geometry queries, estimators and experiment drivers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point ({0}, {1}) lies outside the domain")]
    PointOutsideDomain(f64, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("segment leaves the domain near ({0}, {1})")]
    SegmentLeavesDomain(f64, f64),

    #[error("quadrature did not converge within {0} panels")]
    QuadratureNonConvergence(usize),

    #[error("tally context mismatch: {0}")]
    ContextMismatch(String),

    #[error("timeout fraction {0:.2e} exceeds the 1e-3 budget")]
    TooManyTimeouts(f64),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("domain '{0}' is not flagged starlike")]
    NotStarlike(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for an [`Error::InvalidParameter`] with a formatted message.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
