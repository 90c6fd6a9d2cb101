use thiserror::Error;

/// Errors raised while building or operating on a digit system `(M, D, D*)`.
///
/// Every variant has a stable machine-readable name (see [`Error::code`])
/// which the CLI prints before exiting with a nonzero status.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular (det = 0)")]
    SingularMatrix,

    #[error("matrix must be square, got a row of length {cols} in a {rows}-row matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not expanding: an eigenvalue has modulus {modulus}")]
    NotExpanding { modulus: f64 },

    #[error("|det M| = {m} exceeds the supported radix range")]
    UnsupportedRadix { m: u64 },

    #[error("digit set must contain exactly {expected} digits, got {got}")]
    WrongDigitCount { expected: usize, got: usize },

    #[error("digit 0 must be the zero vector")]
    MissingZero,

    #[error("digits {i} and {j} are congruent mod M")]
    NotAResidueSystem { i: usize, j: usize },

    #[error("no unique digit congruent to the given vector; the digit set is not a complete residue system")]
    InvalidDigitSet,

    #[error("operands live in different spaces (primal vs dual)")]
    SpaceMismatch,

    #[error("point has digits beyond scale {scale}")]
    ScaleTooCoarse { scale: i64 },

    #[error("vector is not an element of the integer grid H")]
    NotInH,

    #[error("requested {requested} points, exceeding the budget of {budget}")]
    DepthTooLarge { requested: u128, budget: u128 },

    #[error("rasterization supports dimension 2 only, got dimension {dim}")]
    DimensionUnsupported { dim: usize },

    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("scale bookkeeping violated: {0}")]
    ScaleContract(String),

    #[error("expected a vector of dimension {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

impl Error {
    /// Stable machine-readable error name.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSquare { .. } => "NotSquare",
            Error::NotExpanding { .. } => "NotExpanding",
            Error::UnsupportedRadix { .. } => "UnsupportedRadix",
            Error::WrongDigitCount { .. } => "WrongDigitCount",
            Error::MissingZero => "MissingZero",
            Error::NotAResidueSystem { .. } => "NotAResidueSystem",
            Error::InvalidDigitSet => "InvalidDigitSet",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::ScaleTooCoarse { .. } => "ScaleTooCoarse",
            Error::NotInH => "NotInH",
            Error::DepthTooLarge { .. } => "DepthTooLarge",
            Error::DimensionUnsupported { .. } => "DimensionUnsupported",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::ScaleContract(_) => "ScaleContract",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
