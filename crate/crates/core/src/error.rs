use thiserror::Error;

/// Errors produced by the construction, search, coding and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("transition index out of bounds for order {n}: {detail}")]
    IndexOutOfBounds { n: usize, detail: String },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("code of size {size} exceeds the materialization limit {limit}")]
    TooLarge { size: u128, limit: u128 },

    #[error("rank {rank} out of range (code size {size})")]
    RankOutOfRange { rank: u128, size: u128 },

    #[error("permutation is not a codeword: {0}")]
    NotInCode(String),

    #[error("decoding failed: {0}")]
    DecodeFailure(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
