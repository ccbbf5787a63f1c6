use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("modulus {0} does not fit in 31 bits")]
    ModulusTooLarge(u64),
    #[error("operands live in different fields (p = {left} and p = {right})")]
    ContextMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero is not a unit")]
    NotAUnit,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("left matrix has determinant {det}, which is not allowed by the left group")]
    InvalidLeftMatrix { det: u32 },
    #[error("forms have different degrees ({0} and {1})")]
    DegreeMismatch(usize, usize),
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("prime {0} is not supported here (need p > 3)")]
    UnsupportedPrime(u32),
    #[error("pair is not realizable as a k-invariant")]
    NonRealizable,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("action is not free: {0}")]
    NotFree(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
}
