use thiserror::Error;

use crate::graph::Matching;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("graph has parallel edges")]
    MultiEdge,

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is not connected")]
    Disconnected,

    #[error("odd vertex count {0}: no perfect matching possible")]
    OddVertexCount(usize),

    #[error("matching is not valid: {0}")]
    InvalidMatching(String),

    #[error("pair ({0}, {1}) is already an edge")]
    EdgeAlreadyPresent(usize, usize),

    #[error("pair ({0}, {1}) is not an edge")]
    EdgeMissing(usize, usize),

    #[error("no perfect matching: maximum matching has {} pairs on {n} vertices", .max_matching.len())]
    NoPerfectMatching { n: usize, max_matching: Matching },

    #[error("{what}: size {n} exceeds limit {limit}")]
    TooLarge { what: &'static str, n: usize, limit: usize },

    #[error("{a} is not a quadratic residue modulo {q}")]
    NonResidue { a: i64, q: u64 },

    #[error("matrix is not symmetric")]
    Asymmetric,

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence(_) => 2,
            _ => 1,
        }
    }
}
