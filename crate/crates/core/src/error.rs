use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("the empty graph is not allowed here")]
    EmptyGraph,
    #[error("pattern must be connected")]
    Disconnected,
    #[error("graph has a loop or a parallel edge")]
    NotSimple,
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("series error: {0}")]
    Series(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tuning failed: {0}")]
    Tuning(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("pattern is not strictly balanced")]
    NotStrictlyBalanced,
    #[error("total weight is zero")]
    ZeroWeight,
    #[error("invalid config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
