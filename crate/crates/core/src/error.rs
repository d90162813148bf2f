use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("expected {expected} exponents, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("rank must be positive")]
    ZeroRank,

    #[error("equation {0} has degree {1}, expected at most 2")]
    NotQuadratic(usize, usize),

    #[error("constant {0} cannot be materialized as an exact integer")]
    NonMaterializable(String),

    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("search box has {got} dimensions, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid search bounds for `{0}`: lower exceeds upper")]
    InvalidBounds(String),

    #[error("variable `{0}` is unbounded and not determined by earlier variables")]
    Unenumerable(String),

    #[error("matrix is not in the image of the embedding: {0}")]
    NotInImage(String),

    #[error("parameter `{0}` must be a positive integer")]
    InvalidParameter(String),

    #[error("heisenberg reduction needs rank 2, got {0}")]
    NotHeisenberg(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
