use thiserror::Error;

use crate::automaton::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("vectors are linearly dependent: residual norm {residual:.3e} at input {index}")]
    RankDeficient { index: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("word budget exceeded: {requested} words requested, cap is {cap}")]
    Budget { requested: u128, cap: usize },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("basis construction failed: {0}")]
    Construction(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("automaton is not valid:\n{0}")]
    Validation(ValidationReport),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Usage errors map to exit code 2 in the CLI, everything else to 1.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}
