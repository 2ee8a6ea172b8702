//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph on {p} nodes")]
    NodeOutOfRange { node: usize, p: usize },

    #[error("graphs have different node counts ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("at most {max} nodes are supported, got {p}")]
    TooManyNodes { p: usize, max: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("inconsistent orientation: {0}")]
    Inconsistent(String),

    #[error("{what} exceeds guard: p = {p} > {guard}")]
    GuardExceeded { what: &'static str, p: usize, guard: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("GAS stuck with prefix set {prefix:?}: no admissible node among {remaining:?}")]
    GasStuck {
        prefix: Vec<usize>,
        remaining: Vec<usize>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("schema violation: {0}")]
    Schema(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
