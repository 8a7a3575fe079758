use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UomError {
    #[error("empty matrix")]
    Empty,
    #[error("line {line}: expected {expected} entries, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: invalid token {token:?} (labels are positive integers)")]
    BadToken { line: usize, token: String },
    #[error("matrix has {0} rows; at most {max} are supported", max = crate::matrix::MAX_ROWS)]
    TooManyRows(usize),
    #[error("matrix has {0} columns; at most {max} are supported", max = crate::matrix::MAX_COLS)]
    TooManyColumns(usize),
    #[error("label {0} out of range")]
    LabelOutOfRange(u64),
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    ShapeMismatch(usize, usize, usize, usize),
    #[error("inconsistent pairing in column {column}: {detail}")]
    InconsistentPairing { column: usize, detail: String },
    #[error("invalid swap site: {0}")]
    InvalidSwapSite(String),
    #[error("invalid feature: {0}")]
    BadFeature(String),
    #[error("structured format: {0}")]
    Structured(String),
}

pub type Result<T> = std::result::Result<T, UomError>;
