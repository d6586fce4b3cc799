use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ManybodyError {
    #[error("{n} atoms exceed the configured maximum of {max}")]
    DimensionOverflow { n: usize, max: usize },
    #[error("expected {expected} sites, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("evolution time must be non-negative, got {0}")]
    NegativeTime(f64),
}
