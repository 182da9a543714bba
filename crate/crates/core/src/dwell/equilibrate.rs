//! Two-sided diagonal equilibration for the spectral condition number.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numerics::{condition_number, ComplexMatrix, Norm, NumericsError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquilibrationSettings {
    pub max_iters: usize,
    /// Stop once the relative change of κ between sweeps falls below this.
    pub rel_tol: f64,
}

impl Default for EquilibrationSettings {
    fn default() -> Self {
        Self { max_iters: 1000, rel_tol: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equilibration {
    pub d_left: Vec<f64>,
    pub d_right: Vec<f64>,
    /// κ of the unscaled matrix.
    pub kappa_initial: f64,
    /// Smallest κ(D_L·S·D_R) seen over all sweeps.
    pub kappa_min: f64,
    pub iterations: usize,
}

fn scaled(s: &ComplexMatrix, left: &[f64], right: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(s.nrows(), s.ncols(), |i, j| s[(i, j)] * Complex64::new(left[i] * right[j], 0.0))
}

/// Alternates Euclidean column and row normalization of `D_L·S·D_R`,
/// keeping the best iterate. The identity scaling is the starting point, so
/// `kappa_min ≤ κ(S)`.
pub fn equilibrate_condition(s: &ComplexMatrix, settings: &EquilibrationSettings) -> Result<Equilibration, NumericsError> {
    let n = s.nrows();
    let kappa_initial = condition_number(s, Norm::Spectral)?;
    let mut left = vec![1.0; n];
    let mut right = vec![1.0; n];
    let mut best = (kappa_initial, left.clone(), right.clone());
    let mut previous = kappa_initial;
    let mut iterations = 0;

    for _ in 0..settings.max_iters {
        iterations += 1;
        let m = scaled(s, &left, &right);
        for (j, r) in right.iter_mut().enumerate() {
            let norm = m.column(j).norm();
            if norm > 0.0 {
                *r /= norm;
            }
        }
        let m = scaled(s, &left, &right);
        for (i, l) in left.iter_mut().enumerate() {
            let norm = m.row(i).norm();
            if norm > 0.0 {
                *l /= norm;
            }
        }
        let kappa = condition_number(&scaled(s, &left, &right), Norm::Spectral)?;
        if kappa < best.0 {
            best = (kappa, left.clone(), right.clone());
        }
        if (previous - kappa).abs() <= settings.rel_tol * previous {
            break;
        }
        previous = kappa;
    }

    let (kappa_min, d_left, d_right) = best;
    Ok(Equilibration { d_left, d_right, kappa_initial, kappa_min, iterations })
}
