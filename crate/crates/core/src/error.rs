use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("oracle enumeration limit of {limit} nodes exceeded")]
    OracleLimit { limit: u64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("irrevocable decision violated: {0}")]
    Irrevocable(String),
    #[error("no inner solver for norm kind {0}")]
    NoSolver(String),
    #[error("cascade exhausted after {0} agents")]
    CascadeExhausted(usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("assertion {what} failed in trial {trial}; replay with seed {seed}")]
    Assertion { what: String, trial: usize, seed: u64 },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidSpec(msg.into()))
}
