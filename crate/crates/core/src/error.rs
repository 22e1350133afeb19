use thiserror::Error;

use crate::ensemble::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(ValidationReport),
    #[error("eigenphase {index} is not an N-th root of unity (deviation {deviation:.3e})")]
    InvalidPhases { index: usize, deviation: f64 },
    #[error("expansion coefficient {index} vanishes")]
    DegenerateCoefficient { index: usize },
    #[error("two-state mapping is singular: C1 + C2 - 1 = {denominator:.3e}")]
    DegenerateMapping { denominator: f64 },
    #[error("problem is not in standard form (residual {residual:.3e})")]
    NotStandardForm { residual: f64 },
    #[error("expected {expected} states, found {found}")]
    WrongStateCount { expected: usize, found: usize },
    #[error("top eigenvalue of the transformed reference state has multiplicity {multiplicity}")]
    DegenerateTopEigenvalue { multiplicity: usize },
    #[error("ensemble is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("numeric solver did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
    #[error("no negative eigenvalue found (smallest {min_eigenvalue:.3e})")]
    NoNegativeEigenvalue { min_eigenvalue: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
