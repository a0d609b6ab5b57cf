use thiserror::Error;

/// Which simplicity rule an input edge broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    DuplicateEdge,
    SelfLoop,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateEdge => f.write_str("duplicate edge"),
            Violation::SelfLoop => f.write_str("self-loop"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{kind} ({u}, {v}) in strict mode")]
    StrictViolation { kind: Violation, u: usize, v: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),
    #[error("contraction family sets overlap at vertex {0}")]
    OverlappingFamily(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("input does not look like {expected}: {msg}")]
    FormatMismatch { expected: &'static str, msg: String },
    #[error("invalid conductance parameter {0}")]
    InvalidPhi(f64),
    #[error("set of size {size} exceeds the exhaustive limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("graph needs at least 2 vertices, got {0}")]
    GraphTooSmall(usize),
    #[error("exhaustive oracle supports at most {limit} vertices, got {n}")]
    ExhaustiveTooLarge { n: usize, limit: usize },
    #[error("power iteration did not converge after {iters} iterations (residual {residual:e})")]
    ConvergenceFailure { iters: usize, residual: f64 },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
