//! Command-line front end for `entropy-op`: entropy time series, Wigner
//! grids and an identity-verification report, written as CSV or JSON.

pub mod commands;
pub mod config;
pub mod output;

use entropy_op::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const RESIDUAL: i32 = 2;
    pub const NUMERICAL_GUARD: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{failed} of {total} verification checks exceeded their tolerance")]
    ResidualFailure { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => exit::VALIDATION,
            CliError::ResidualFailure { .. } => exit::RESIDUAL,
            CliError::Io(_) => exit::VALIDATION,
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_)
                | CoreError::InvalidTolerance { .. }
                | CoreError::InvalidDim(_)
                | CoreError::ComplexBeta(_) => exit::VALIDATION,
                _ => exit::NUMERICAL_GUARD,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
