use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CurateError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CurateError {
    #[error("I/O error after line {last_good_line}: {source}")]
    Io {
        last_good_line: u64,
        #[source]
        source: io::Error,
    },

    #[error("cannot read {path}: {source}")]
    Resource {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("missing resources for active stages: {}", .0.join(", "))]
    MissingResources(Vec<String>),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid Bloom filter parameters: {0}")]
    BloomParams(String),

    #[error("Bloom filter needs {needed} bytes, above the configured cap of {cap} bytes")]
    MemoryCap { needed: u64, cap: u64 },

    #[error("vector error: {0}")]
    Vector(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("malformed model file: {0}")]
    Model(String),

    #[error("scorer failed: {0}")]
    Scorer(String),

    #[error("stats schema mismatch: {0}")]
    StatsSchema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CurateError {
    pub fn resource(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CurateError::Resource {
            path: path.into(),
            source,
        }
    }
}
