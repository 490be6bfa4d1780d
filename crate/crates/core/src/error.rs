use thiserror::Error;

/// Errors raised by the library. Search failures (no minor found, finder
/// got stuck) are ordinary results, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("vertex {vertex} out of range for graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("scale range empty for graph of order {0}")]
    ScaleRangeEmpty(usize),
    #[error("scale {scale} out of range 0..={max} for graph of order {order}")]
    ScaleOutOfRange { scale: u32, max: i64, order: usize },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("graph of order {order} exceeds exact cap {cap}; use heuristic finder")]
    ExactCapExceeded { order: usize, cap: usize },
    #[error("graph of order {order} exceeds brute-force cap {cap}")]
    BruteCapExceeded { order: usize, cap: usize },
    #[error("stale violation: {0}")]
    StaleViolation(String),
    #[error("malformed remap chain: {0}")]
    MalformedRemap(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("density below c(t)+ε: {density} < {required}")]
    DensityBelowThreshold { density: String, required: String },
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("malformed binary trace: {0}")]
    BinaryFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
