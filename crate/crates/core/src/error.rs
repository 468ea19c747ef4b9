use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),

    #[error("node id {id} out of range for side {side} (size {len})")]
    InvalidNode { side: char, id: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("biregular degree sequence infeasible: {0}")]
    Handshake(String),

    #[error("failed to build a simple biregular graph after {retries} resamples")]
    GeneratorExhausted { retries: usize },

    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error("non-finite {what} on edge (x={x}, y={y}) at sweep {sweep}")]
    NonFinite {
        what: &'static str,
        x: usize,
        y: usize,
        sweep: usize,
    },

    #[error("non-finite local field at {side}-node {id}")]
    NonFiniteField { side: char, id: usize },

    #[error("instance has {n_x} X-nodes, exact solver capped at {cap}")]
    OracleCap { n_x: usize, cap: usize },

    #[error("cluster {0} has no usable documents")]
    EmptyCluster(String),

    #[error("term weights missing for {} term(s): {}", .0.len(), .0.join(", "))]
    VocabularyGap(Vec<String>),

    #[error("reference summary is empty")]
    EmptyReference,

    #[error("{0}: empty input")]
    Empty(&'static str),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("instance {index} (seed {seed}): {source}")]
    Instance {
        index: usize,
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("cluster {cluster}: {source}")]
    Cluster {
        cluster: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
