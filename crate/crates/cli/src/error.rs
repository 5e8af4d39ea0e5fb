use std::process::ExitCode;

use thiserror::Error;

/// Failures reported by the command-line interface.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid arguments, configuration or input data.
    #[error("invalid input:\n{}", .0.iter().map(|p| format!("  - {p}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<String>),
    /// A solver failed on valid input.
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(vec![msg.into()])
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) | CliError::Io { .. } => ExitCode::from(1),
            CliError::Numerical(_) => ExitCode::from(2),
        }
    }
}

impl From<subdiff_core::Error> for CliError {
    fn from(e: subdiff_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string().split("; ").map(str::to_owned).collect())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::io("csv stream", io),
            other => CliError::validation(format!("malformed csv: {other:?}")),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
