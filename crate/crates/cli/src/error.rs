use std::path::Path;

use thiserror::Error;

/// Failure of a command. Each variant maps to its own exit code and its
/// message starts with the name of what went wrong.
#[derive(Debug, Error)]
pub enum CliError {
    /// A state or parameter violated an invariant of the measures.
    #[error("{0}")]
    Invariant(#[from] entdist::Error),

    #[error("FileError: {path}: {message}")]
    File { path: String, message: String },

    #[error("ConfigError: {path}: {message}")]
    Config { path: String, message: String },

    #[error("VerifyFailed: {failed} of {total} properties failed")]
    VerifyFailed { failed: usize, total: usize },

    #[error("UsageError: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::File { .. } | CliError::Config { .. } => 2,
            CliError::VerifyFailed { .. } => 3,
            CliError::Usage(_) => 4,
        }
    }

    pub(crate) fn file(path: &Path, message: impl ToString) -> Self {
        CliError::File { path: path.display().to_string(), message: message.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
