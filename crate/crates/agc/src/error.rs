//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors reported by field construction, linear algebra, code
/// construction, check synthesis, and decoding.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field too small: q = {0} < 3")]
    FieldTooSmall(u64),
    #[error("field too large: q = {0} exceeds {limit}", limit = crate::gf::MAX_Q)]
    FieldTooLarge(u128),
    #[error("division by zero in GF(q)")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad code shape: l = {l} must satisfy 1 <= l <= lp = {lp}")]
    BadShape { l: usize, lp: usize },
    #[error("index {index} out of range 0..{limit}")]
    IndexOutOfRange { index: u64, limit: u64 },
    #[error("invalid minor index: {0}")]
    BadIndex(String),
    #[error("{what} of size {size} exceeds the budget of {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("degenerate restriction: evaluation matrix has rank {got}, expected {expected}")]
    DegenerateRestriction { got: usize, expected: usize },
    #[error("anchor coordinate of a local check carries coefficient 0")]
    AnchorMissing,
    #[error("check set anchored at {0}, expected anchor 0")]
    WrongAnchor(u64),
    #[error("two check supports overlap at non-anchor point {0}")]
    OverlapDetected(u64),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
