use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    /// The message carries serde_json's line and column.
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("unknown suite `{0}` (expected one of: submodularity, monotonicity, downward_closure, exchange, waterfilling)")]
    UnknownSuite(String),
    #[error(transparent)]
    Core(#[from] swipt_core::Error),
}

impl CliError {
    /// 2 for usage, config and input-format problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Parse { .. } | CliError::UnknownSuite(_) => 2,
            CliError::Io { .. } | CliError::Core(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
