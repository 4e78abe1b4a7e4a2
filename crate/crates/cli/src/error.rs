use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("solver failure: {0}")]
    Solver(#[from] secrecy_core::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0} of {1} checks failed")]
    ChecksFailed(usize, usize),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::ChecksFailed(..) => 1,
            Self::Config(_) | Self::Io { .. } => 2,
            Self::Solver(e) if is_input_error(e) => 2,
            Self::Solver(_) => 3,
        }
    }
}

/// Library errors caused by malformed input rather than the solve itself.
fn is_input_error(e: &secrecy_core::Error) -> bool {
    use secrecy_core::Error::*;
    matches!(e, DimensionMismatch(_) | NotHermitian(_) | NonFinite | InvalidParameter(_) | Format(_) | Empty(_))
}

pub type CliResult<T> = Result<T, CliError>;
