use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;

use thiserror::Error;

/// Failure classes and the exit codes they map to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Resource(String),
    #[error("session aborted: {0}")]
    Aborted(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Mismatch(_) => 1,
            CliError::Format(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Aborted(_) => 4,
        })
    }

    pub fn format(path: &Path, err: impl Display) -> Self {
        CliError::Format(format!("{}: {err}", path.display()))
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::format(path, e))
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Format(format!("cannot write {}: {e}", path.display())))
}
