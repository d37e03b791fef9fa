//! Error types shared across the solver.

use thiserror::Error;

/// Errors raised by grid construction, operators, root finding and evolution.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// Two fields (or a field and a grid) disagree on shape or convention.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The vertical grid is too coarse for the requested stencil.
    #[error("resolution too coarse: {0}")]
    Resolution(String),

    /// Re F does not change sign over the supplied bracket.
    #[error("no sign change of Re F on bracket [{lo}, {hi}]; shear may be too weak")]
    NoRoot { lo: f64, hi: f64 },

    /// Root iteration failed to converge.
    #[error("root iteration did not converge: {0}")]
    NoConvergence(String),

    /// Growth-rate fitting was asked for an ill-posed window.
    #[error("growth-rate fit failed: {0}")]
    FitError(String),

    /// A ratio diagnostic was evaluated on data with a vanishing denominator.
    #[error("undefined ratio: denominator is zero")]
    UndefinedRatio,

    /// A tendency evaluation produced non-finite values.
    #[error("non-finite values encountered at t = {t}")]
    NonFinite { t: f64 },

    /// Invariant violations that indicate a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
