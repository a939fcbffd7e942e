use thiserror::Error;

/// Errors produced by graph construction, generators, and the algorithms.
#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {index} ({u}, {v}): index out of range for {n_left}+{n_right} vertices")]
    EdgeOutOfRange {
        index: usize,
        u: usize,
        v: usize,
        n_left: usize,
        n_right: usize,
    },

    #[error("vertex index out of range: {0}")]
    VertexOutOfRange(String),

    #[error("graph is not square: {n_left} left vs {n_right} right vertices")]
    NotSquare { n_left: usize, n_right: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} too large for exhaustive search: {actual} > {limit}")]
    TooLarge {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("matching is not maximum: an augmenting path ends at right vertex {0}")]
    NotMaximum(usize),

    #[error("graph has no perfect matching")]
    NoPerfectMatching,

    #[error("graph is disconnected (minimum cut 0); decompose it into pieces first")]
    Disconnected,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
