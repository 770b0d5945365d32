use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("base ring mismatch: {0}")]
    BaseMismatch(String),
    #[error("not contained: {0}")]
    NotContained(String),
    #[error("ill-defined module map: {0}")]
    IllDefinedMap(String),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("group order {order} exceeds the configured cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },
    #[error("invalid digit sequence: {0}")]
    InvalidDigits(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
