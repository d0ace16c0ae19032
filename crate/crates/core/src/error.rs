use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of size {size} exceeds the configured cap of {cap} elements")]
    TooLarge { size: u128, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element index {index} is out of range for a set of {size} elements")]
    OutOfRange { index: u64, size: u64 },
    #[error("element {0} does not lie in the subfield F_q")]
    NotInSubfield(u32),
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("codomain mismatch: {0}")]
    CodomainMismatch(String),
    #[error("the given elements are not a basis over F_q")]
    NotABasis,
    #[error("the given bases are not a dual pair")]
    NotDual,
    #[error("map is not a permutation")]
    NotPermutation,
    #[error("k must be a positive integer")]
    InvalidK,
    #[error("map is not {0}-to-1")]
    NotKToOne(u64),
    #[error("Tr(H(x)) is a constant map")]
    ConstantTrace,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration space of {0} candidates is too large for exhaustive mode")]
    SearchTooLarge(u128),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
