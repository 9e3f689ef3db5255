use thiserror::Error;

/// Errors shared across the graph, linear-algebra, and divisor layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop edge at vertex {0} is not allowed")]
    LoopEdge(usize),

    #[error("vertex {vertex} out of range for graph with {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("edge multiplicity must be positive")]
    NonPositiveMultiplicity,

    #[error("edge multiplicity overflows the supported range")]
    MultiplicityOverflow,

    #[error("duplicate edge pair ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("invalid hinge spec: {0}")]
    InvalidHingeSpec(String),

    #[error("thick cycle needs at least 2 segments, got {0}")]
    ThickCycleTooShort(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("matrix is not square ({rows} x {cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("divisor length {got} does not match vertex count {expected}")]
    DivisorLengthMismatch { got: usize, expected: usize },

    #[error("divisor has nonzero degree {0}; order is undefined")]
    NonzeroDegree(i64),

    #[error("cycle index {0} out of range")]
    CycleIndexOutOfRange(usize),

    #[error("cycle indices must differ")]
    EqualCycleIndices,

    #[error("mixed cycle sizes: {0}")]
    MixedCycleSizes(String),

    #[error("inputs must be coprime: gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),

    #[error("no witness pair exists for n = m = 1")]
    NoWitness,

    #[error("argument must be positive")]
    NonPositiveArgument,

    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("toggling edge ({0}, {1}) disconnects the graph")]
    ToggleDisconnects(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
