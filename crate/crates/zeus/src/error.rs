use std::path::PathBuf;

use zeus_core::fitting::DatasetError;
use zeus_core::{ConfigError, ZeusError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Plan(String),
    #[error("every local run ended in a domain error")]
    AllRunsFailed,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

impl From<ZeusError> for Error {
    fn from(e: ZeusError) -> Self {
        match e {
            ZeusError::Config(c) => Error::Config(c),
            ZeusError::NoValidOptimum => Error::AllRunsFailed,
        }
    }
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 configuration, 2 all runs failed, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Plan(_) | Error::Dataset(_) => 1,
            Error::AllRunsFailed => 2,
            Error::Io { .. } | Error::Format { .. } => 3,
        }
    }
}
