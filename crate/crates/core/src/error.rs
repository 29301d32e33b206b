use thiserror::Error;

/// Errors raised by the lattice operators, eigensolvers and experiments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("Hessian at {location:?} is not positive definite (eigenvalue {eigenvalue:e})")]
    NonPositiveHessian { location: Vec<f64>, eigenvalue: f64 },

    #[error("point {location:?} is not a zero of the potential (V = {value:e})")]
    NotAZero { location: Vec<f64>, value: f64 },

    #[error("floating point overflow evaluating {0}")]
    Overflow(String),

    #[error("{what} did not converge within {iterations} iterations")]
    ConvergenceFailure { what: String, iterations: usize },

    #[error("adaptive quadrature exceeded depth {depth}")]
    QuadratureFailure { depth: usize },

    #[error("box too small: {0}")]
    BoxTooSmall(String),

    #[error("degenerate interval decomposition: {0}")]
    DegenerateDecomposition(String),

    #[error("partition supports overlap: centers {first} and {second}")]
    OverlappingSupports { first: usize, second: usize },

    #[error("partition is not a quadratic partition of unity (max defect {defect:e})")]
    PartitionNotUnity { defect: f64 },

    #[error("only {available} of {requested} combinations available")]
    Exhausted { requested: usize, available: usize },

    #[error("every entry is below the zero threshold")]
    AllZero,

    #[error("test function is not strictly positive at lattice index {index}")]
    NonPositiveFunction { index: usize },

    #[error("zero vector")]
    ZeroVector,

    #[error("test vectors span an ill-conditioned subspace (condition number {condition:e})")]
    IllConditionedSpan { condition: f64 },

    #[error("problem too large for the dense solver: {size} points (limit {limit})")]
    TooLarge { size: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
