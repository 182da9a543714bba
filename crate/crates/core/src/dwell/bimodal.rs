//! Refinements for two subsystems.
//!
//! With two modes the only cycle is `1 → 2 → 1`, so every bound is a
//! function of `S = V₂⁻¹V₁`. Eigenvectors may be rescaled freely, which turns
//! `S` into `D_L·S·D_R`; minimizing the condition number over those scalings
//! tightens the certificate.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::equilibrate::{equilibrate_condition, EquilibrationSettings};
use super::{smallest_integer_above, DwellError, DwellMethod, DwellMode, DwellReport, Scaling};
use crate::cycles::Cycle;
use crate::graph::{loss_weight, transient_constant};
use crate::numerics::{
    abs_entrywise, condition_number, eigendecompose, invert, spectral_radius, ComplexMatrix,
    EigenTolerance, ModalForm, ModalKind, Norm, PNorm, RealMatrix,
};

/// Eigen-decomposed pair with its transfer matrix `S = V₂⁻¹V₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct BimodalPair {
    pub first: ModalForm,
    pub second: ModalForm,
    pub transfer: ComplexMatrix,
    gamma: f64,
}

impl BimodalPair {
    /// `−ln(ρ₁ρ₂)`, the loss of the 2-cycle.
    pub fn cycle_loss(&self) -> f64 {
        loss_weight(self.first.spectral_radius) + loss_weight(self.second.spectral_radius)
    }

    pub fn rho_max(&self) -> f64 {
        self.first.spectral_radius.max(self.second.spectral_radius)
    }

    /// `ρ(|S|·|S⁻¹|)`, the minimum of `κ_p(D_L·S·D_R)` for `p ∈ {1, ∞}`.
    pub fn optimal_p_condition(&self) -> Result<f64, DwellError> {
        let inv = invert(&self.transfer)?;
        let product = flushed_abs(&self.transfer) * flushed_abs(&inv);
        Ok(nonnegative_spectral_radius(&product)?)
    }

    fn report(&self, mode: DwellMode, method: DwellMethod, bound_real: f64, norm: Norm) -> DwellReport {
        DwellReport {
            mode,
            method,
            bound_real,
            tau_int: smallest_integer_above(bound_real),
            critical_cycle: Some(Cycle::new(vec![0, 1])),
            rho_max: Some(self.rho_max()),
            j_max_norm: None,
            gamma: self.gamma,
            scaling: None,
            norm: Some(norm),
            epsilons: vec![],
        }
    }

    /// Pairs two eigenvector forms.
    pub fn from_forms(first: ModalForm, second: ModalForm) -> Result<Self, DwellError> {
        for (index, f) in [&first, &second].into_iter().enumerate() {
            if f.kind != ModalKind::NonDefective {
                return Err(DwellError::RequiresNonDefective { index });
            }
        }
        let transfer = invert(&second.basis)? * &first.basis;
        let gamma = transient_constant(&[first.clone(), second.clone()])?;
        Ok(BimodalPair { first, second, transfer, gamma })
    }

    /// Forms with bases `V₁·D_R` and `V₂·D_L⁻¹`, whose transfer matrix is
    /// `D_L·S·D_R`. Their switching graph carries the rescaled certificate.
    pub fn scaled_forms(&self, scaling: &Scaling) -> [ModalForm; 2] {
        let mut first = self.first.clone();
        let mut second = self.second.clone();
        for (j, d) in scaling.right.iter().enumerate() {
            first.basis.column_mut(j).scale_mut(*d);
        }
        for (j, d) in scaling.left.iter().enumerate() {
            second.basis.column_mut(j).unscale_mut(*d);
        }
        [first, second]
    }
}

/// Entries of `S` or `S⁻¹` at most this fraction of the largest entry are
/// rounding noise and treated as zero.
pub const NEGLIGIBLE_ENTRY: f64 = 1e-12;

fn flushed_abs(m: &ComplexMatrix) -> DMatrix<f64> {
    let a = abs_entrywise(m).into_matrix();
    let cut = NEGLIGIBLE_ENTRY * a.max();
    a.map(|x| if x <= cut { 0.0 } else { x })
}

/// Spectral radius of a nonnegative matrix as the largest radius over the
/// irreducible diagonal blocks of its support digraph. A nearly triangular
/// `|S||S⁻¹|` has an n-fold eigenvalue 1 that a dense eigensolver only
/// resolves to about `u^(1/n)`; the block split returns it exactly.
fn nonnegative_spectral_radius(m: &DMatrix<f64>) -> Result<f64, DwellError> {
    let n = m.nrows();
    let mut g = DiGraph::<(), ()>::with_capacity(n, n * n);
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)] > 0.0 {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let mut rho: f64 = 0.0;
    for comp in tarjan_scc(&g) {
        let idx: Vec<usize> = comp.iter().map(|v| v.index()).collect();
        let r = if idx.len() == 1 {
            m[(idx[0], idx[0])]
        } else {
            let block = DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]);
            spectral_radius(&RealMatrix::from_matrix(block)?)
        };
        rho = rho.max(r);
    }
    Ok(rho)
}

/// Eigen-decomposes both subsystems.
pub fn bimodal_pair(a1: &RealMatrix, a2: &RealMatrix, tol: &EigenTolerance) -> Result<BimodalPair, DwellError> {
    let first = eigendecompose(a1, tol).map_err(|source| DwellError::Subsystem { index: 0, source })?;
    let second = eigendecompose(a2, tol).map_err(|source| DwellError::Subsystem { index: 1, source })?;
    BimodalPair::from_forms(first, second)
}

/// `τ > ln(min κ(D_L·S·D_R)) / (−ln(ρ₁ρ₂))` with the minimum estimated by equilibration.
pub fn bimodal_min_dwell_corollary1(pair: &BimodalPair, settings: &EquilibrationSettings) -> Result<DwellReport, DwellError> {
    let eq = equilibrate_condition(&pair.transfer, settings)?;
    let bound = libm::log(eq.kappa_min) / pair.cycle_loss();
    let mut r = pair.report(DwellMode::Minimum, DwellMethod::Corollary1, bound, Norm::Spectral);
    r.scaling = Some(Scaling { left: eq.d_left, right: eq.d_right });
    Ok(r)
}

/// `τ > ln ρ(|S||S⁻¹|) / (−ln(ρ₁ρ₂))`, exact over diagonal scalings for `p ∈ {1, ∞}`.
pub fn bimodal_min_dwell_corollary2(pair: &BimodalPair, p: PNorm) -> Result<DwellReport, DwellError> {
    let bound = libm::log(pair.optimal_p_condition()?) / pair.cycle_loss();
    Ok(pair.report(DwellMode::Minimum, DwellMethod::Corollary2, bound, p.into()))
}

/// `τ > ln κ_p(S) / (−ln(ρ₁ρ₂))` without rescaling.
pub fn bimodal_min_dwell_pnorm(pair: &BimodalPair, p: PNorm) -> Result<DwellReport, DwellError> {
    let kappa = condition_number(&pair.transfer, p.into())?;
    let bound = libm::log(kappa) / pair.cycle_loss();
    Ok(pair.report(DwellMode::Minimum, DwellMethod::PNormBimodal, bound, p.into()))
}

/// `τ > ln K / (−2 ln ρ_max)` where `K` is `κ(S)` in `norm`, or its minimum over
/// diagonal scalings when `scaled` (equilibration for the spectral norm, the
/// closed form for `p ∈ {1, ∞}`).
pub fn bimodal_avg_dwell(
    pair: &BimodalPair,
    norm: Norm,
    scaled: bool,
    settings: &EquilibrationSettings,
) -> Result<DwellReport, DwellError> {
    let mut scaling = None;
    let k = match (norm, scaled) {
        (_, false) => condition_number(&pair.transfer, norm)?,
        (Norm::Spectral, true) => {
            let eq = equilibrate_condition(&pair.transfer, settings)?;
            scaling = Some(Scaling { left: eq.d_left, right: eq.d_right });
            eq.kappa_min
        }
        (Norm::One | Norm::Infinity, true) => pair.optimal_p_condition()?,
    };
    let bound = libm::log(k) / (2.0 * loss_weight(pair.rho_max()));
    let mut r = pair.report(DwellMode::Average, DwellMethod::AverageBimodal, bound, norm);
    r.scaling = scaling;
    Ok(r)
}
