use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid impurity spec: {0}")]
    InvalidImpuritySpec(String),

    #[error("impurity overflow evaluating {spec} on counts {counts:?}")]
    ImpurityOverflow { spec: String, counts: Vec<u64> },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid cost vector: {0}")]
    InvalidCosts(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema mismatch: {0}")]
    Schema(String),

    #[error("unsupported model format version {found} (expected {expected})")]
    ModelVersion { found: u32, expected: u32 },

    #[error("malformed model: {0}")]
    ModelFormat(String),

    #[error("forest is empty")]
    EmptyForest,

    #[error("operation requires a binary task, forest has {0} classes")]
    NotBinary(usize),

    #[error("oracle instance rejected: {0}")]
    OracleLimits(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
