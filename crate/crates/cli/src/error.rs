use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Args(String),
    #[error("{0}")]
    Core(#[from] cdpw_core::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Args(_) => 2,
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}
