//! Dense matrix wrappers, norms and condition numbers.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::NumericsError;

/// Complex dense matrix. Bases, Jordan factors and basis products live here.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Reciprocal condition number below which a matrix is treated as singular.
pub const BREAKDOWN_RCOND: f64 = 1e-14;

/// Square real matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix(DMatrix<f64>);

impl RealMatrix {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_slice(n: usize, entries: &[f64]) -> Result<Self, NumericsError> {
        if n == 0 || entries.len() != n * n {
            return Err(NumericsError::NotSquare {
                rows: n,
                cols: if n == 0 { 0 } else { entries.len() / n },
            });
        }
        Self::from_matrix(DMatrix::from_row_slice(n, n, entries))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumericsError> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(NumericsError::NotSquare { rows: n, cols: bad.len() });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(n, &flat)
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self, NumericsError> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(NumericsError::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if !m[(i, j)].is_finite() {
                    return Err(NumericsError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        self.0.map(|x| Complex64::new(x, 0.0))
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// All eigenvalues, in the order the real Schur form produces them.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let schur = Schur::new(self.0.clone());
        schur.complex_eigenvalues().iter().copied().collect()
    }
}

/// Norms used for gains and condition numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    Spectral,
    One,
    Infinity,
}

/// Induced p-norms with a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PNorm {
    One,
    Infinity,
}

impl From<PNorm> for Norm {
    fn from(p: PNorm) -> Self {
        match p {
            PNorm::One => Norm::One,
            PNorm::Infinity => Norm::Infinity,
        }
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &RealMatrix) -> f64 {
    m.eigenvalues().iter().map(|l| l.norm()).fold(0.0, f64::max)
}

/// Maximum column sum (`One`) or row sum (`Infinity`) of entry moduli.
pub fn p_norm(m: &ComplexMatrix, p: PNorm) -> f64 {
    match p {
        PNorm::One => (0..m.ncols())
            .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max),
        PNorm::Infinity => (0..m.nrows())
            .map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

pub fn matrix_norm(m: &ComplexMatrix, norm: Norm) -> f64 {
    match norm {
        Norm::Spectral => spectral_norm(m),
        Norm::One => p_norm(m, PNorm::One),
        Norm::Infinity => p_norm(m, PNorm::Infinity),
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Inverse of a square matrix, refusing matrices singular to working precision.
pub fn invert(m: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    let s = singular_values(m);
    let (max, min) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    let rcond = if max > 0.0 { min / max } else { 0.0 };
    if !(rcond > BREAKDOWN_RCOND) {
        return Err(NumericsError::Singular { rcond });
    }
    m.clone().try_inverse().ok_or(NumericsError::Singular { rcond })
}

/// `‖M‖·‖M⁻¹‖` in the chosen norm.
pub fn condition_number(m: &ComplexMatrix, norm: Norm) -> Result<f64, NumericsError> {
    match norm {
        Norm::Spectral => {
            let s = singular_values(m);
            let (max, min) = (s[0], s[s.len() - 1]);
            let rcond = if max > 0.0 { min / max } else { 0.0 };
            if !(rcond > BREAKDOWN_RCOND) {
                return Err(NumericsError::Singular { rcond });
            }
            Ok(max / min)
        }
        Norm::One | Norm::Infinity => {
            let inv = invert(m)?;
            Ok(matrix_norm(m, norm) * matrix_norm(&inv, norm))
        }
    }
}

/// Entrywise modulus `|M|`.
pub fn abs_entrywise(m: &ComplexMatrix) -> RealMatrix {
    RealMatrix(m.map(|z| z.norm()))
}
