use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("field exponent must be at least 1, got {0}")]
    InvalidExponent(u32),
    #[error("field order {p}^{alpha} does not fit in usize")]
    FieldTooLarge { p: u64, alpha: u32 },
    #[error("element does not belong to this field")]
    ForeignElement,
    #[error("division by zero")]
    DivisionByZero,
    #[error("order parameter k = {0} is below 3")]
    InvalidOrder(i64),
    #[error("q = {0} is not 1 mod 4, the quadratic character is odd and C(omega) is not symmetric")]
    NotSymmetrizable(usize),
    #[error("field order {q} does not match 2k - 1 for k = {k}")]
    OrderMismatch { q: usize, k: usize },
    #[error("not a unit complex number: |z|^2 - 1 = {0:e}")]
    NotUnit(f64),
    #[error("index {index} out of range for order {order}")]
    InvalidIndex { index: usize, order: usize },
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("equivalence witness failed to verify (residual {0:e})")]
    WitnessMismatch(f64),
    #[error("symbolic exponent layer is malformed: {0}")]
    InvalidExponentLayer(String),
    #[error("exact layer unavailable")]
    ExactLayerUnavailable,
    #[error("shift b must be non-zero")]
    InvalidShift,
    #[error("S^2 is not a multiple of the identity (residual {0:e})")]
    NotInvolutory(f64),
    #[error("off-diagonal entry ({row}, {col}) is not unimodular")]
    NotUnimodular { row: usize, col: usize },
    #[error("diagonal entry {0} is not zero")]
    NonZeroDiagonal(usize),
    #[error("rank {found} after thresholding, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("Gram reconstruction residual {0:e} exceeds tolerance")]
    GramMismatch(f64),
    #[error("input is not a symmetric conference matrix (residual {0:e})")]
    NotConference(f64),
    #[error("matrix shape {rows}x{cols} is invalid here")]
    InvalidShape { rows: usize, cols: usize },
}
