use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_INVALID_ARGUMENT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_ESTIMATION_FAILED: i32 = 4;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dirclus::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        CliError::Csv {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                dirclus::Error::InvalidArgument(_) | dirclus::Error::UndefinedMetric(_) => {
                    EXIT_INVALID_ARGUMENT
                }
                dirclus::Error::EstimationFailed(_) => EXIT_ESTIMATION_FAILED,
                dirclus::Error::Io { .. }
                | dirclus::Error::MalformedRecord { .. }
                | dirclus::Error::DimensionMismatch { .. } => EXIT_IO,
            },
            CliError::Usage(_) => EXIT_INVALID_ARGUMENT,
            CliError::Io { .. } | CliError::Csv { .. } => EXIT_IO,
        }
    }
}
