use std::path::PathBuf;

/// Failure of a benchmark run, classified by the exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(#[from] rodsim_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Solver(_) => 2,
            BenchError::Config(_) => 3,
            BenchError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        BenchError::Io { path: path.into(), source }
    }
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;
