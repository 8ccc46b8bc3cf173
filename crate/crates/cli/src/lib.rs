//! Command implementations for the `volterra` binary. Each command returns a
//! [`report::ReportDoc`] that `main` renders as a table, JSON or CSV.

pub mod commands;
pub mod report;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<volterra_core::Error> for CliError {
    fn from(e: volterra_core::Error) -> Self {
        use volterra_core::Error as E;
        match e {
            E::InvalidInput(_) | E::CapacityExceeded { .. } | E::StructureMismatch { .. } => CliError::Usage(e.to_string()),
            E::NumericalBreakdown(_) | E::Internal(_) => CliError::Compute(e.to_string()),
        }
    }
}
