use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n = {requested} exceeds the configured resource cap of {cap}")]
    ResourceLimit { requested: u64, cap: u64 },

    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("correlation is undefined: {0}")]
    DegenerateCorrelation(String),

    #[error("record {name:?} has no non-book citation data")]
    MissingNonbook { name: String },

    #[error("record {name:?} is inconsistent: {reason}")]
    InconsistentRecord { name: String, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("count cache: {0}")]
    Cache(String),
}
