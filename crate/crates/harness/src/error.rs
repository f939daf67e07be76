use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] encdec_core::Error),
    #[error("{excluded} of {total} realizations had degenerate post-selection at N = {n}, strength = {strength}")]
    DegenerateAbort { n: usize, strength: f64, excluded: usize, total: usize },
    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("analysis error: {0}")]
    Analysis(String),
}

impl HarnessError {
    pub fn io(path: impl AsRef<std::path::Path>, err: impl std::fmt::Display) -> Self {
        HarnessError::Io { path: path.as_ref().display().to_string(), message: err.to_string() }
    }

    /// Process exit status for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::DegenerateAbort { .. } => 3,
            HarnessError::Io { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
