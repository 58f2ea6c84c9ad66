use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")]
    NonHermitianInput { defect: f64, tol: f64 },

    #[error("eigenvalue iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("operator is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace {trace:.12} deviates from 1 by more than {tol:.1e}")]
    Normalization { trace: f64, tol: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("negative input {0} where a non-negative value is required")]
    NegativeInput(f64),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("group table violates closure or group axioms: {0}")]
    ClosureViolation(String),

    #[error("representation is not a homomorphism: worst pair ({g}, {h}) deviates by {deviation:.3e}")]
    HomomorphismViolation { g: usize, h: usize, deviation: f64 },

    #[error("representation matrix for element {element} is not unitary (defect {defect:.3e})")]
    NonUnitaryElement { element: usize, defect: f64 },

    #[error("input operator is not unitary (defect {defect:.3e})")]
    NonUnitaryInput { defect: f64 },

    #[error("unitary is not symmetry preserving (worst deviation {deviation:.3e})")]
    NotSymmetryPreserving { deviation: f64 },

    #[error("Hilbert-space dimension {dim} exceeds the cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
