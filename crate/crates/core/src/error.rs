use thiserror::Error;

/// Errors shared across the estimation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotPositiveSemidefinite { min_eig: f64 },
    #[error("matrix is singular or numerically not positive definite (min eigenvalue {min_eig:e})")]
    SingularMatrix { min_eig: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not Hermitian (relative asymmetry {asym:e})")]
    NotHermitian { asym: f64 },
    #[error("non-finite entry encountered")]
    NonFiniteEntry,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("degenerate sample: residual quadratic form below 1e-30 at index {index}")]
    DegenerateSample { index: usize },
    #[error("perturbation generation failed: no PD perturbed shape after 50 halvings")]
    PerturbationFailure,
    #[error("zero denominator in alpha ratio")]
    ZeroDenominator,
    #[error("one-step update left the positive definite cone")]
    NotPositiveDefinite,
}

pub type Result<T> = std::result::Result<T, Error>;
