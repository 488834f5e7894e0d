use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rank {0}")]
    InvalidRank(usize),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("matrix is not charge conserving: nonzero entry at ({row}, {col})")]
    NotChargeConserving { row: usize, col: usize },
    #[error("map is not injective or out of range")]
    NotInjective,
    #[error("gauge factor on edge ({i}, {j}) is zero")]
    ZeroGaugeFactor { i: usize, j: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("parameters do not match the shape: {0}")]
    ParamMismatch(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("edge ({i}, {j}) has f-type and admits no extension")]
    FTypeDetected { i: usize, j: usize },
    #[error("edge ({i}, {j}) matches no admissible rank-2 form")]
    Unclassifiable { i: usize, j: usize },
    #[error("pair does not satisfy the relations")]
    NotARepresentation,
    #[error("inconsistent parameters: {0}")]
    InconsistentParameters(String),
    #[error("dense and subset verifiers disagree")]
    OracleDisagreement,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
