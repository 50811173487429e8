use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: elrepair_core::Error },

    #[error(transparent)]
    Core(#[from] elrepair_core::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for a repair problem that breaks a precondition, 1 otherwise.
    pub fn exit_code(&self) -> ExitCode {
        use elrepair_core::Error as E;
        match self {
            CliError::Core(E::Precondition(_)) | CliError::Input { source: E::Precondition(_), .. } => {
                ExitCode::from(2)
            }
            _ => ExitCode::from(1),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
