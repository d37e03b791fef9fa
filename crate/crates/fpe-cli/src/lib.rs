//! Library half of the `fpe` binary: configuration loading/validation and
//! the on-disk output formats (CSV series, raw float64 snapshots with JSON
//! sidecars).  Kept as a library so integration tests can read back exactly
//! what the binary writes.

pub mod config;
pub mod output;

use std::fmt;

/// Errors split by exit-code class: bad input (exit 2) versus everything
/// else (exit 1).  A blow-up is not an error — runs that end in a flagged
/// blow-up still write their outputs and exit with code 3.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Other(anyhow::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) => write!(f, "{msg}"),
            CliError::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

impl From<fpe_core::CoreError> for CliError {
    fn from(e: fpe_core::CoreError) -> Self {
        use fpe_core::CoreError::*;
        match e {
            InvalidParameter { .. } | DimensionMismatch(_) | Resolution(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Other(anyhow::Error::new(other)),
        }
    }
}

pub fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub type Result<T> = std::result::Result<T, CliError>;
