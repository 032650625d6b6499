use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point not on curve")]
    NotOnCurve,
    #[error("singular curve (discriminant is zero)")]
    SingularCurve,
    #[error("unsupported characteristic {0}")]
    UnsupportedCharacteristic(u64),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("non-standard denominator shape: {0}")]
    NonStandardDenominator(String),
    #[error("m-multiple is infinity")]
    InfinityMultiple,
    #[error("not a kernel polynomial: {0}")]
    NotAKernel(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
