use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: at least one node is required")]
    EmptyInput,

    #[error("nodes and values differ in length ({nodes} nodes, {values} values)")]
    ShapeMismatch { nodes: usize, values: usize },

    #[error("duplicate nodes at positions {first} and {second}")]
    DuplicateNodes { first: usize, second: usize },

    #[error("near-duplicate nodes at positions {first} and {second}: gap {gap:e} below {threshold:e}")]
    NearDuplicateNodes {
        first: usize,
        second: usize,
        gap: f64,
        threshold: f64,
    },

    #[error("non-finite value in input at position {0}")]
    NonFinite(usize),

    #[error("{needed} nodes needed to carry degree {degree}, got {got}")]
    InsufficientNodes {
        degree: usize,
        needed: usize,
        got: usize,
    },

    #[error("polynomial of degree 0 has no roots to compute")]
    ConstantPolynomial,

    #[error("degenerate input: all sample values are zero")]
    ZeroPolynomial,

    #[error("eigensolver did not converge within {budget} iterations")]
    EigensolveFailure { budget: usize },

    #[error("root vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("exact matching refused: {left}x{right} exceeds the size guard of {limit}")]
    SizeGuard {
        left: usize,
        right: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
