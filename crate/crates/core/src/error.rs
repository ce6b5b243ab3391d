use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function being evaluated.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid L-function instance: {0}")]
    InvalidInstance(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("x = {x} exceeds the prime table limit {limit}")]
    BeyondTable { x: f64, limit: u64 },

    #[error("coefficient oracle does not cover x = {x} (support {support})")]
    OracleCoverage { x: f64, support: u64 },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
