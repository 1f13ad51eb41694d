use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index sets of unequal size ({rows} rows, {cols} columns)")]
    UnequalIndexSets { rows: usize, cols: usize },
    #[error("index {index} out of range for dimension {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("index set is not strictly increasing")]
    UnsortedIndices,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("order {k} out of range 1..={max}")]
    OrderOutOfRange { k: usize, max: usize },
    #[error("test vector must be nonzero")]
    ZeroVector,
    #[error("boundary signs undefined for zero vector")]
    BoundarySignsOfZero,
    #[error("vector is not alternating: {0}")]
    NotAlternating(String),
    #[error("enumeration cap exceeded: size {size} > cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("q must be strictly negative componentwise")]
    QNotNegative,
    #[error("alternating sign patterns are excluded from the orthant property")]
    AlternatingPattern,
    #[error("sequence index {index} outside the provided range {start}..={end}")]
    SequenceRange { index: i64, start: i64, end: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
