use granapprox_core::Error as CoreError;
use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
            CliError::Infeasible(_) => 4,
        }
    }

    pub fn input(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        CliError::Input(format!("{context}: {err}"))
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        let msg = err.to_string();
        match err {
            CoreError::InvalidDataset(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::IndexOutOfRange { .. }
            | CoreError::Domain { .. } => CliError::Input(msg),
            CoreError::Infeasible(_) | CoreError::Solver(_) => CliError::Infeasible(msg),
            _ => CliError::Config(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
