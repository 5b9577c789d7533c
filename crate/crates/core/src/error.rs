use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The requested work exceeds an enumeration or memory limit.
    #[error("capacity exceeded: {what} (requested {requested}, limit {limit})")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("density undefined for target < 2")]
    DensityUndefined,

    #[error("malformed instance text at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// The target is too small for hashing to pay off; solve with the table DP instead.
    #[error("target {target} is below 2n = {two_n}; use the dynamic program")]
    UseDp { target: String, two_n: usize },

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("bit-length reduction failed to reach the modulus bound after {rounds} rounds")]
    ReductionDiverged { rounds: usize },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, requested: u128, limit: u128) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
