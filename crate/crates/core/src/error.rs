use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("modulus {0} is not irreducible")]
    Reducible(String),

    #[error("field element {0} does not belong to this field")]
    InvalidElement(String),

    #[error("field specs differ")]
    FieldMismatch,

    #[error("{0} is not a primitive element")]
    NotPrimitive(String),

    #[error("zero has no discrete logarithm")]
    ZeroLog,

    #[error("characteristic {p} does not exceed {k}: Newton recursion needs to divide by {k}")]
    SmallCharacteristic { p: u64, k: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("element {0} is not valid for the group")]
    InvalidGroupElement(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {required} required, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
