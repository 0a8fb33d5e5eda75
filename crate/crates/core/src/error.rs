use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("multi-index length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("truncation depth {requested} exceeds digit depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },

    #[error("digit {digit} out of range for p = {p}")]
    BadDigit { digit: u64, p: u32 },

    #[error("not a p^{ell}-th power in K((t)): exponent {exponent} is not divisible by {modulus}")]
    NotPPower { ell: u32, exponent: i64, modulus: i64 },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("incomparable precision: compared range [{lo}, {hi}) is empty")]
    Incomparable { lo: i64, hi: i64 },

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("missing rule: {0}")]
    MissingRule(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("incompatible rule: {0}")]
    Incompatible(String),

    #[error("pole at origin in {0}; shift or supply solution manually")]
    PoleAtOrigin(String),

    #[error("not expressible in the declared basis: {0}")]
    NotInBasis(String),

    #[error("not infinitesimal: {0}")]
    NotInfinitesimal(String),

    #[error("element is not constant: {0}")]
    NotConstant(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
