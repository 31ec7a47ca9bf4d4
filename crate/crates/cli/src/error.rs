use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numerical failure at {context}: {source}")]
    Numerical {
        context: String,
        source: squeezejc::Error,
    },

    #[error("oracle suite failed: {0} check(s) out of tolerance")]
    OracleFailed(usize),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical { .. } | CliError::OracleFailed(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    pub fn numerical(context: impl Into<String>) -> impl FnOnce(squeezejc::Error) -> Self {
        let context = context.into();
        move |source| CliError::Numerical { context, source }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
