use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed game file: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite payoff at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("index {index} out of range (0..{len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("row-count mismatch: {0} vs {1}")]
    RowCountMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fixed-point solve did not converge (best residual {residual:e} after {iterations} iterations)")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("assessor failed on representation {index} (duplications {duplications:?}): {source}")]
    Representation {
        index: usize,
        duplications: Vec<usize>,
        #[source]
        source: Box<Error>,
    },
}
