use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants split into caller mistakes (bad dimensions, bad indices, bad
/// input data) and internal consistency failures, which indicate that a
/// constructed object does not satisfy an identity it is built to satisfy.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must be square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("invalid generator index pair ({i}, {j}); need 0 <= i < j <= 7")]
    InvalidGenerator { i: usize, j: usize },

    #[error("matrix is not antisymmetric: entry ({row},{col}) = {value} but entry ({col},{row}) = {mirror}")]
    NotAntisymmetric {
        row: usize,
        col: usize,
        value: String,
        mirror: String,
    },

    #[error("coeffs and matrix disagree at generator G_{{{i},{j}}}: coeffs give {coeff}, matrix gives {entry}")]
    EncodingMismatch {
        i: usize,
        j: usize,
        coeff: String,
        entry: String,
    },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("trace power must be a positive even integer, got {0}")]
    OddTracePower(u32),

    #[error("sampling bound must be at least 1")]
    ZeroBound,

    #[error("element is not fixed by the triality automorphism")]
    NotFixedBySigma,

    #[error("division by zero")]
    DivisionByZero,

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for errors caused by well-formed but mathematically invalid input
    /// data, as opposed to malformed input or usage mistakes.
    pub fn is_invalid_data(&self) -> bool {
        matches!(
            self,
            Error::NotAntisymmetric { .. } | Error::EncodingMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
