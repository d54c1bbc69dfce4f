use std::io;

use thiserror::Error;

/// Failure of a CLI command, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or an invalid configuration.
    #[error("{0}")]
    Usage(String),
    /// The experiment itself could not be carried out.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl From<afdm_core::Error> for CliError {
    fn from(e: afdm_core::Error) -> Self {
        use afdm_core::Error::*;
        match e {
            Config(_) | Dimension { .. } => CliError::Usage(e.to_string()),
            Scenario(_) | Degenerate(_) | Exhausted(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(format!("csv error: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
