use std::path::PathBuf;

use plasment_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{file}: {message}")]
    Parse { file: String, message: String },

    #[error("{file}: at `{key}`: {message}")]
    Schema { file: String, key: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl HarnessError {
    /// Process exit code: 1 for configuration problems, 2 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(e) => match e {
                CoreError::InvalidParameter { .. }
                | CoreError::InvalidGrid(_)
                | CoreError::NotBound(_)
                | CoreError::PermittivityCoverage { .. }
                | CoreError::PermittivityParse { .. }
                | CoreError::FringePlan { .. } => 1,
                _ => 2,
            },
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
