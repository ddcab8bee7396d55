use thiserror::Error;

use crate::channel::ValidationReport;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("columns are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix is not a projector (deviation {deviation:e})")]
    NotAProjector { deviation: f64 },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("not a density matrix: {reason}")]
    NotADensityMatrix { reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
    #[error("Renyi order must be >= 1, got {0}")]
    InvalidAlpha(f64),
    #[error("Kraus operators do not form a unital trace-preserving channel")]
    NotUnitalChannel(ValidationReport),
    #[error("operator is not fixed by the channel (residual {residual:e})")]
    NotFixed { residual: f64 },
    #[error("subspace is not invariant (residual {residual:e})")]
    NotInvariant { residual: f64 },
    #[error("tolerance failure: {0}")]
    ToleranceFailure(String),
    #[error("decomposition matching failed: {0}")]
    MultisetMismatch(String),
    #[error("measurement statistics are preserved; no violating state exists")]
    NoViolation,
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("optimizer did not converge: duality gap {gap:e} after {iterations} iterations")]
    NonConvergence { gap: f64, iterations: usize },
    #[error("block list is empty")]
    EmptyBlockList,
}

pub type Result<T> = std::result::Result<T, Error>;
