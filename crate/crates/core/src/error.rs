//! Crate-wide error type.

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix entries are not all integral")]
    NotIntegral,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not monic with integer coefficients")]
    NotMonicIntegral,
    #[error("prime {0} divides the leading coefficient")]
    BadReduction(BigInt),

    #[error("polynomial is reducible: {0}")]
    Reducible(String),
    #[error("irreducibility undetermined after mod-p certificates were exhausted")]
    IrreducibilityUndetermined,

    #[error("input is zero")]
    ZeroInput,
    #[error("primality testing not supported for inputs of this size")]
    PrimalityRangeExceeded,
    #[error("integer factorization exceeded the configured effort")]
    FactorizationTimeout,

    #[error("prime {0} divides the index; splitting data unavailable")]
    IndexObstruction(BigInt),
    #[error("field has degree 1; operation requires degree >= 2")]
    DegreeOne,
    #[error("field is wildly ramified at {0}")]
    WildRamification(BigInt),
    #[error("tameness undetermined at {0}")]
    TamenessUndetermined(BigInt),

    #[error("search exceeded the configured node budget")]
    SearchOverflow,
    #[error("brute-force cap exceeded: {0}")]
    BruteForceCap(String),

    #[error("{0}")]
    Precondition(String),
}
