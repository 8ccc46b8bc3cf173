use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {got} exceeds the supported limit {limit}")]
    CapacityExceeded {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("operation requires a {expected} matrix, got {found}")]
    StructureMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),
}
