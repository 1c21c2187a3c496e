use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },

    #[error("weight {weight} outside 0..={truncation}")]
    WeightOutOfRange { weight: u32, truncation: u32 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("functor expects {expected} argument(s), got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("functor library too shallow: level {required} required, {available} available")]
    InsufficientLevel { required: usize, available: usize },

    #[error("Chern-number hypothesis fails: {0}")]
    ChernHypothesis(String),

    #[error("Â-pairing hypothesis fails: {0}")]
    AhatHypothesis(String),

    #[error("invalid pairing data: {0}")]
    InvalidPairing(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
