use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Argument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },

    /// The report has been written; the run still counts as a failure.
    #[error("{0}")]
    NotConverged(String),

    #[error(transparent)]
    Solver(#[from] hslra::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Argument(_) => 1,
            Self::Io { .. } | Self::Input { .. } => 2,
            Self::NotConverged(_) => 3,
            Self::Solver(e) => match e {
                hslra::Error::NoConvergence { .. } | hslra::Error::NotPositiveDefinite { .. } => 3,
                _ => 1,
            },
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn input(path: &Path, message: impl Into<String>) -> Self {
        Self::Input {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn arg_error<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Argument(msg.into()))
}
