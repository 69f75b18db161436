//! CLI error type with the exit-code contract: 1 usage, 2 data, 3 internal.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("[{stage}] {message}")]
    Data {
        stage: &'static str,
        message: String,
    },

    #[error("[{stage}] {message}")]
    Internal {
        stage: &'static str,
        message: String,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }

    pub fn data(stage: &'static str, message: impl ToString) -> Self {
        Self::Data {
            stage,
            message: message.to_string(),
        }
    }

    pub fn internal(stage: &'static str, message: impl ToString) -> Self {
        Self::Internal {
            stage,
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Data { .. } => 2,
            Self::Internal { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
