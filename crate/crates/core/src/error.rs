use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = PinlabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PinlabError {
    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty test set")]
    EmptyTestSet,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("unsupported model format version {found:?} (expected v1)")]
    VersionMismatch { found: String },

    #[error("total mismatch: trailer says {declared}, histogram holds {actual}")]
    TotalMismatch { declared: u64, actual: u64 },

    #[error("invalid mask pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid observation: {0}")]
    InvalidObservation(String),

    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),

    #[error("position {0} is not missing in this pattern")]
    PositionNotMissing(usize),

    #[error("k exceeds candidate space (k = {k}, candidates = {space})")]
    KExceedsCandidateSpace { k: usize, space: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl PinlabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PinlabError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        PinlabError::Format {
            line,
            message: message.into(),
        }
    }
}
