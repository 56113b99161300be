use std::path::PathBuf;

pub type WgsResult<T> = Result<T, WgsError>;

#[derive(Debug, thiserror::Error)]
pub enum WgsError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: malformed JSON: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] wgs_core::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl WgsError {
    /// Process exit code: 2 for anything traceable to the input, 3 for
    /// numerical aborts.
    pub fn exit_code(&self) -> i32 {
        use wgs_core::Error as E;
        match self {
            Self::Numerical(_) => 3,
            Self::Core(
                E::ConvergenceFailure { .. } | E::DegenerateArgument | E::OracleMismatch { .. } | E::NotNormalized { .. },
            ) => 3,
            _ => 2,
        }
    }
}
