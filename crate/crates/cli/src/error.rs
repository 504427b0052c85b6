use std::path::{Path, PathBuf};

use crate::wav::WavError;

/// Everything a command can fail with, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Wav {
        path: PathBuf,
        #[source]
        source: WavError,
    },
    #[error("{algo} diverged at sample {sample}")]
    Divergence { algo: String, sample: usize },
    #[error("oracle check failed: {0}")]
    Oracle(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Wav { .. } => 3,
            CliError::Divergence { .. } => 4,
            CliError::Oracle(_) => 5,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<fapanc::Error> for CliError {
    fn from(e: fapanc::Error) -> Self {
        match e {
            fapanc::Error::NumericalDivergence { sample }
            | fapanc::Error::DenominatorUnderflow { sample } => CliError::Divergence {
                algo: "filter".into(),
                sample: sample as usize,
            },
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
