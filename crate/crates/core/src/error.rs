use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the clustering toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {actual_rows}x{actual_cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        actual_rows: usize,
        actual_cols: usize,
    },

    #[error("object {0} is not assigned to any cluster")]
    Unassigned(usize),

    #[error("cluster index {index} out of range for K = {k}")]
    ClusterOutOfRange { index: usize, k: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability vector has a negative or non-finite entry at {0}")]
    InvalidProbability(usize),

    #[error("all assignment weights are zero for object {0}")]
    DegenerateWeights(usize),

    #[error("dataset has no ground-truth labels")]
    MissingLabels,

    #[error("empty centroid set")]
    EmptyCentroids,

    #[error("could not place {k} centers with separation {separation} after {attempts} draws; enlarge the center box")]
    SeparationUnattainable {
        k: usize,
        separation: f64,
        attempts: usize,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
