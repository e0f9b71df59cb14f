use thiserror::Error;

/// Everything that can go wrong while building or evaluating an instance.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds tolerance {tolerance:e})")]
    NonHermitian { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not antisymmetric (defect {defect:e})")]
    NotAntisymmetric { defect: f64 },

    #[error("eigenvalue {value} violates the domain of {function} near boundary {boundary}")]
    DomainViolation {
        function: &'static str,
        value: f64,
        boundary: f64,
    },

    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e} below -{tolerance:e})")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },

    #[error("form is not positive definite (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("inner product does not dominate the symplectic form (|Sigma| = {norm})")]
    DominationFailure { norm: f64 },

    #[error("1 + delta is not strictly positive (minimum eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("perturbation is not strictly positive (minimum eigenvalue {min_eigenvalue:e})")]
    NotStrictlyPositive { min_eigenvalue: f64 },

    #[error("polarisation is not standard (margin {margin:e} <= {eps:e})")]
    NotStandard { margin: f64, eps: f64 },

    #[error("polarisation is not factorial (margin {margin:e} <= {eps:e})")]
    NotFactorial { margin: f64, eps: f64 },

    #[error("mass must be positive (got {0})")]
    NonPositiveMass(f64),

    #[error("matrix is singular")]
    Singular,

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("instance too large: dimension {dim} exceeds limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
