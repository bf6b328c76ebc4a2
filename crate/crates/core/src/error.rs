use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0} vanishes in a denominator")]
    Pole(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("ill-conditioned inversion (condition {condition:.3e}, residual {residual:.3e})")]
    Conditioning { condition: f64, residual: f64 },
    #[error("query outside domain: {0}")]
    OutOfDomain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
