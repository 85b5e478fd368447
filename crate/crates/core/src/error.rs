use thiserror::Error;

/// Errors raised by the tensor, kinematics, material and verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tensor lacks minor symmetry (relative residual {residual:.3e} > tol {tol:.1e})")]
    NotMinorSymmetric { residual: f64, tol: f64 },

    #[error("deformation gradient is not invertible with positive determinant (det = {det:.6e})")]
    NonInvertible { det: f64 },

    #[error("matrix is not symmetric positive definite (min eigenvalue {min_eigenvalue:.6e})")]
    NotSpd { min_eigenvalue: f64 },

    #[error("matrix is not symmetric (relative residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("deformation is not isochoric (det F = {det:.12})")]
    NotIsochoric { det: f64 },

    #[error("Green-Naghdi rate requires a polar spin override")]
    MissingSpin,

    #[error("input `{what}` lacks a required symmetry (relative residual {residual:.3e})")]
    InputAsymmetric { what: &'static str, residual: f64 },

    #[error("model evaluation failed: {0}")]
    ModelEvaluationFailed(String),

    #[error("integration step {step} rejected: det F = {det:.6e}")]
    StepRejected { step: usize, det: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
