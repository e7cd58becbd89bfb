use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must satisfy 2 <= M <= {max}", max = crate::modring::MAX_MODULUS)]
    InvalidModulus(i64),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(i64, i64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("not uniquely decodable: det(C) = {det} is not a unit mod {modulus}")]
    NotUniquelyDecodable { det: i64, modulus: i64 },

    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("target error rate {0} is not bracketed by the curve")]
    NotBracketed(f64),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
