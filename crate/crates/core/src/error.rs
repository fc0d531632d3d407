use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {order} exceeds the configured limit {limit}")]
    FieldTooLarge { order: u128, limit: u64 },
    #[error("invalid defining polynomial: {0}")]
    BadModulus(String),
    #[error("elements or polynomials belong to different fields")]
    ContextMismatch,
    #[error("element encoding {0} is out of range")]
    ElementOutOfRange(u64),
    #[error("basis is linearly dependent over the coefficient field")]
    DependentBasis,
    #[error("code dimension {k} exceeds length {n}")]
    TooManyGenerators { k: usize, n: usize },
    #[error("empty basis")]
    EmptyBasis,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("enumeration of {needed} steps exceeds the guard of {limit}")]
    GuardExceeded { needed: u128, limit: u64 },
    #[error("the code contains no monomial x^(q^t)")]
    NoMonomial,
    #[error("linearized polynomial is not invertible")]
    NotInvertible,
    #[error("duplicate exponent {0}")]
    DuplicateExponent(i64),
    #[error("evaluation points are F_q-linearly dependent")]
    DependentPoints,
    #[error("tower has no level for extension degree {0}")]
    MissingLevel(usize),
    #[error("exact division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("wrong arity: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
