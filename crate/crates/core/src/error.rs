use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("state space of {states} states exceeds the analytic cap of {cap}")]
    StateSpace { states: usize, cap: usize },

    #[error("buffer capacity must be finite for the analytic model")]
    UnboundedCapacity,

    #[error("linear system is singular; the chain is not SIA")]
    Singular,

    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
