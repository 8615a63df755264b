use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Everything a command can fail with, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}: {message}")]
    ConfigParse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// 2 for configuration problems, 3 for bad or missing input data, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigParse { .. } | CliError::Config(_) => 2,
            CliError::Data(_) | CliError::Read { .. } => 3,
            CliError::Write { .. } | CliError::Internal(_) => 1,
        }
    }

    pub fn read(path: &Path, source: io::Error) -> Self {
        CliError::Read {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn write(path: &Path, source: io::Error) -> Self {
        CliError::Write {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<xsim_core::Error> for CliError {
    fn from(e: xsim_core::Error) -> Self {
        use xsim_core::Error as E;
        match e {
            E::InvalidConfig(_) | E::BudgetTooSmall { .. } => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
