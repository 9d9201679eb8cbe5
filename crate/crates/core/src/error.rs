use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polynomial is reducible: {0}")]
    Reducible(String),

    #[error("resolvent rounding failed: slack {slack:.3e} at {bits} bits")]
    Precision { slack: f64, bits: u32 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("cache error: {0}")]
    Cache(String),

    #[error("incomplete coverage: {0}")]
    Coverage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache(e.to_string())
    }
}
