use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value must be a positive integer")]
    NonPositive,

    #[error("integer overflow in intermediate product")]
    Overflow,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("expected {expected} component graphs, got {got}")]
    PartCountMismatch { expected: usize, got: usize },

    #[error("vertex {0} is isolated; the normalized Laplacian is undefined")]
    IsolatedVertex(usize),

    #[error("component {index} is not {declared}-regular")]
    NonRegularComponent { index: usize, declared: usize },

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("matrix must be square with at least one row")]
    BadShape,

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("spectra have different totals: {0} vs {1}")]
    TotalMismatch(usize, usize),

    #[error("component {0} has no materializable graph")]
    NotMaterializable(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown family: {0}")]
    UnknownFamily(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
