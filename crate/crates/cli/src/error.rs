use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

/// Failures of a command, each mapped to a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid scenario, or settings the library rejects.
    #[error("config error: {0}")]
    ConfigParse(String),

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The scenario lies outside the region where the equilibrium exists.
    #[error("infeasible scenario: {0}")]
    Infeasible(pensiongame_core::Error),

    #[error("{failed} of {total} verification checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigParse(_) | CliError::Io { .. } => 1,
            CliError::Infeasible(_) => 2,
            CliError::VerificationFailed { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::ConfigParse(_) => "ConfigParse",
            CliError::Io { .. } => "IoFailure",
            CliError::Infeasible(_) => "Infeasible",
            CliError::VerificationFailed { .. } => "VerificationFailed",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            kind: self.kind(),
            code: match self {
                CliError::Infeasible(e) => Some(e.code()),
                _ => None,
            },
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Library errors raised while running a command: inadmissible regions are
/// infeasibility, anything else is a settings problem.
impl From<pensiongame_core::Error> for CliError {
    fn from(e: pensiongame_core::Error) -> Self {
        if e.is_infeasibility() {
            CliError::Infeasible(e)
        } else {
            CliError::ConfigParse(e.to_string())
        }
    }
}

/// Machine-readable form of a failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<&'static str>,
    pub message: String,
    pub exit_code: u8,
}
