use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}`{key}`: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Config { line: Option<usize>, key: String, message: String },

    #[error("unknown figure `{0}` (expected one of {1})")]
    UnknownFigure(String, String),

    #[error("table lacks series: {}", .0.join(", "))]
    MissingSeries(Vec<String>),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error(transparent)]
    Model(#[from] relaysel::Error),
}

impl CliError {
    pub(crate) fn config(line: Option<usize>, key: &str, message: impl Into<String>) -> Self {
        CliError::Config { line, key: key.to_string(), message: message.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Process exit code: 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::UnknownFigure(..) | CliError::MissingSeries(_) => 1,
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Model(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
