use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input has no finite valuation")]
    ZeroInput,
    #[error("operation requires a nonconstant input")]
    ConstantInput,
    #[error("{0} is not l-behaved for l = {1}")]
    NotBehaved(String, u64),
    #[error("every element of a field of even order is a square")]
    EvenCharacteristic,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("two-square representation not found for {0} within bound {1}")]
    SearchExhausted(String, usize),
    #[error("formula is not positive-existential: {0}")]
    NotPositive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
