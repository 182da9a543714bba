//! Dense linear algebra over real and complex scalars.

mod matrix;
mod modal;

pub use matrix::{
    abs_entrywise, condition_number, invert, matrix_norm, p_norm, singular_values, spectral_norm,
    spectral_radius, ComplexMatrix, Norm, PNorm, RealMatrix, BREAKDOWN_RCOND,
};
pub use modal::{
    choose_epsilon, eigendecompose, epsilon_for_radius, epsilon_grid, jordan_decompose, modal_form,
    EigenTolerance, JordanBlock, ModalForm, ModalKind, RECONSTRUCTION_TOL,
};

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular to working precision (reciprocal condition {rcond:e})")]
    Singular { rcond: f64 },
    #[error("matrix is not Schur stable (spectral radius {spectral_radius})")]
    NotSchurStable { spectral_radius: f64 },
    #[error("eigenvalue {eigenvalue} is defective (algebraic multiplicity {algebraic}, geometric {geometric})")]
    Defective { eigenvalue: Complex64, algebraic: usize, geometric: usize },
    #[error("Jordan chain construction failed: {reason}")]
    ChainFailure { reason: &'static str },
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("decomposition does not reproduce the matrix (error {error:e})")]
    Reconstruction { error: f64 },
}
