//! Experiment harness: catalog verification, Monte-Carlo sweeps, and the
//! reports built on top of them.

pub mod config;
pub mod report;
pub mod sweep;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] css_ldpc::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// Process exit status: 2 for verification failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
