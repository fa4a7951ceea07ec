use std::path::Path;

use pinlab_core::PinlabError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    /// 1 usage, 2 I/O, 3 data format.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl From<PinlabError> for CliError {
    fn from(err: PinlabError) -> Self {
        let msg = err.to_string();
        match err {
            PinlabError::Io { .. } => CliError::Io(msg),
            PinlabError::EmptyCorpus
            | PinlabError::EmptyTestSet
            | PinlabError::Format { .. }
            | PinlabError::VersionMismatch { .. }
            | PinlabError::TotalMismatch { .. } => CliError::Data(msg),
            PinlabError::InvalidPattern(_)
            | PinlabError::InvalidObservation(_)
            | PinlabError::InvalidCandidate(_)
            | PinlabError::PositionNotMissing(_)
            | PinlabError::KExceedsCandidateSpace { .. }
            | PinlabError::InvalidArgument(_) => CliError::Usage(msg),
        }
    }
}
