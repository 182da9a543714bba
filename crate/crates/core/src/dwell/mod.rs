//! Dwell-time certificates from cycle optima.
//!
//! A minimum dwell time `τ > ν(G)` (maximum cycle ratio) or an average dwell
//! time `τ > μ(G)/(−ln r)` (maximum cycle mean over the largest contraction
//! rate `r`) makes every admissible switching signal asymptotically stable.
//! Since time is discrete, every report also carries the smallest admissible
//! integer dwell time.

mod bimodal;
mod equilibrate;

pub use bimodal::{
    bimodal_avg_dwell, bimodal_min_dwell_corollary1, bimodal_min_dwell_corollary2,
    bimodal_min_dwell_pnorm, bimodal_pair, BimodalPair,
};
pub use equilibrate::{equilibrate_condition, Equilibration, EquilibrationSettings};

use alloc::vec::Vec;

use crate::cycles::{max_cycle_mean, max_cycle_ratio, Cycle, CycleError};
use crate::graph::{build_graph, loss_weight, transient_constant, Adjacency, GraphError, SwitchingGraph};
use crate::numerics::{
    epsilon_for_radius, epsilon_grid, jordan_decompose, spectral_radius, EigenTolerance, ModalForm,
    ModalKind, Norm, NumericsError, RealMatrix,
};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DwellError {
    #[error("subsystem {index}: {source}")]
    Subsystem { index: usize, source: NumericsError },
    #[error("subsystem {index} is defective; this method needs an eigenvector basis")]
    RequiresNonDefective { index: usize },
    #[error("no epsilon gives every Jordan factor a norm below 1")]
    EpsilonSearchFailed,
    #[error("bimodal methods need exactly two subsystems, got {0}")]
    NotBimodal(usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

impl DwellError {
    /// Index of the offending subsystem, when the failure is tied to one.
    pub fn subsystem(&self) -> Option<usize> {
        match self {
            DwellError::Subsystem { index, .. } | DwellError::RequiresNonDefective { index } => Some(*index),
            DwellError::Graph(GraphError::MixedFormsInvalid { index, .. }) => Some(*index),
            _ => None,
        }
    }

    pub fn is_not_schur_stable(&self) -> bool {
        matches!(
            self,
            DwellError::Subsystem { source: NumericsError::NotSchurStable { .. }, .. }
                | DwellError::Numerics(NumericsError::NotSchurStable { .. })
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DwellMode {
    Minimum,
    Average,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DwellMethod {
    /// Maximum cycle ratio with eigenvector weights.
    Theorem1,
    /// Maximum cycle ratio with ε-scaled Jordan weights.
    Theorem2,
    /// Maximum cycle mean over `−ln ρ_max`.
    Theorem3,
    /// Maximum cycle mean over `−ln max‖J_ε‖`.
    Theorem3Defective,
    /// Bimodal minimum dwell with two-sided equilibration of `V₂⁻¹V₁`.
    Corollary1,
    /// Bimodal minimum dwell with the closed-form optimal p-norm scaling.
    Corollary2,
    /// Bimodal minimum dwell with the unscaled p-norm condition number.
    PNormBimodal,
    /// Bimodal average dwell from the single 2-cycle.
    AverageBimodal,
}

impl DwellMethod {
    pub fn name(self) -> &'static str {
        match self {
            DwellMethod::Theorem1 => "theorem1",
            DwellMethod::Theorem2 => "theorem2",
            DwellMethod::Theorem3 => "theorem3",
            DwellMethod::Theorem3Defective => "theorem3_defective",
            DwellMethod::Corollary1 => "corollary1",
            DwellMethod::Corollary2 => "corollary2",
            DwellMethod::PNormBimodal => "pnorm_bimodal",
            DwellMethod::AverageBimodal => "average_bimodal",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            DwellMethod::Theorem1,
            DwellMethod::Theorem2,
            DwellMethod::Theorem3,
            DwellMethod::Theorem3Defective,
            DwellMethod::Corollary1,
            DwellMethod::Corollary2,
            DwellMethod::PNormBimodal,
            DwellMethod::AverageBimodal,
        ]
        .into_iter()
        .find(|m| m.name() == name)
    }
}

/// Diagonal row (`left`) and column (`right`) scalings of `V₂⁻¹V₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaling {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DwellReport {
    pub mode: DwellMode,
    pub method: DwellMethod,
    /// Strict lower bound on the dwell time.
    pub bound_real: f64,
    /// Smallest integer strictly above `bound_real`, at least 1.
    pub tau_int: u64,
    pub critical_cycle: Option<Cycle>,
    pub rho_max: Option<f64>,
    pub j_max_norm: Option<f64>,
    pub gamma: f64,
    pub scaling: Option<Scaling>,
    /// Norm of the condition number for bimodal methods.
    pub norm: Option<Norm>,
    /// ε used per subsystem; empty for eigenvector-based methods.
    pub epsilons: Vec<f64>,
}

impl DwellReport {
    /// No cycle exists: every walk has finitely many switchings.
    pub fn is_acyclic(&self) -> bool {
        self.critical_cycle.is_none()
    }
}

/// Smallest integer strictly greater than `bound`, never below 1.
pub fn smallest_integer_above(bound: f64) -> u64 {
    if bound.is_nan() {
        return u64::MAX;
    }
    let next = libm::floor(bound) + 1.0;
    if next >= u64::MAX as f64 {
        u64::MAX
    } else if next < 1.0 {
        1
    } else {
        next as u64
    }
}

/// How ε is chosen for Jordan decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum EpsilonPolicy {
    /// `(1 − ρ_i)/2` per subsystem.
    #[default]
    Auto,
    /// The same ε for every subsystem.
    Fixed(f64),
    /// `(1 − ρ_i)·2^{−k}`, `k = 1..=10`, keeping the `k` with the smallest bound.
    GridSearch,
}

fn ensure_nondefective(forms: &[ModalForm]) -> Result<(), DwellError> {
    match forms.iter().position(|f| f.kind != ModalKind::NonDefective) {
        Some(index) => Err(DwellError::RequiresNonDefective { index }),
        None => Ok(()),
    }
}

fn ratio_report(
    graph: &SwitchingGraph,
    forms: &[ModalForm],
    method: DwellMethod,
    tol: f64,
) -> Result<DwellReport, DwellError> {
    let cert = max_cycle_ratio(graph, tol)?;
    let bound_real = cert.as_ref().map_or(0.0, |c| c.value);
    let (rho_max, j_max_norm) = radii(forms);
    Ok(DwellReport {
        mode: DwellMode::Minimum,
        method,
        bound_real,
        tau_int: smallest_integer_above(bound_real),
        critical_cycle: cert.map(|c| c.cycle),
        rho_max: Some(rho_max),
        j_max_norm,
        gamma: transient_constant(forms)?,
        scaling: None,
        norm: None,
        epsilons: epsilons_of(forms),
    })
}

fn radii(forms: &[ModalForm]) -> (f64, Option<f64>) {
    let rho = forms.iter().map(|f| f.spectral_radius).fold(0.0, f64::max);
    let jordan = forms.iter().any(|f| f.kind == ModalKind::Jordan);
    let jmax = jordan.then(|| forms.iter().map(|f| f.factor_norm).fold(0.0, f64::max));
    (rho, jmax)
}

fn epsilons_of(forms: &[ModalForm]) -> Vec<f64> {
    if forms.iter().all(|f| f.kind == ModalKind::NonDefective) {
        Vec::new()
    } else {
        forms.iter().map(|f| f.epsilon).collect()
    }
}

/// Minimum dwell time `τ > ν(G)` for non-defective subsystems.
pub fn min_dwell_nondefective(forms: &[ModalForm], adj: &Adjacency, tol: f64) -> Result<DwellReport, DwellError> {
    ensure_nondefective(forms)?;
    let graph = build_graph(forms, adj)?;
    ratio_report(&graph, forms, DwellMethod::Theorem1, tol)
}

/// Jordan forms of every subsystem at the given per-subsystem ε.
pub fn jordan_forms(
    matrices: &[RealMatrix],
    epsilons: &[f64],
    tol: &EigenTolerance,
) -> Result<Vec<ModalForm>, DwellError> {
    matrices
        .iter()
        .zip(epsilons)
        .enumerate()
        .map(|(index, (a, &eps))| {
            jordan_decompose(a, eps, tol).map_err(|source| DwellError::Subsystem { index, source })
        })
        .collect()
}

/// Minimum dwell time `τ > ν(G)` on the ε-scaled Jordan switching graph.
/// Returns the report together with the Jordan forms it was computed from.
pub fn min_dwell_defective(
    matrices: &[RealMatrix],
    adj: &Adjacency,
    policy: EpsilonPolicy,
    eigen_tol: &EigenTolerance,
    tol: f64,
) -> Result<(DwellReport, Vec<ModalForm>), DwellError> {
    let radii: Vec<f64> = matrices
        .iter()
        .enumerate()
        .map(|(index, a)| {
            let rho = spectral_radius(a);
            epsilon_for_radius(rho)
                .map(|_| rho)
                .map_err(|source| DwellError::Subsystem { index, source })
        })
        .collect::<Result<_, _>>()?;

    let candidates: Vec<Vec<f64>> = match policy {
        EpsilonPolicy::Auto => alloc::vec![radii.iter().map(|&r| (1.0 - r) / 2.0).collect()],
        EpsilonPolicy::Fixed(eps) => alloc::vec![alloc::vec![eps; matrices.len()]],
        EpsilonPolicy::GridSearch => {
            let grids: Vec<Vec<f64>> = radii.iter().map(|&r| epsilon_grid(r)).collect();
            (0..10).map(|k| grids.iter().map(|g| g[k]).collect()).collect()
        }
    };

    let mut best: Option<(DwellReport, Vec<ModalForm>)> = None;
    let mut last_err = None;
    for eps in candidates {
        let forms = match jordan_forms(matrices, &eps, eigen_tol) {
            Ok(f) => f,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        if forms.iter().any(|f| !(f.factor_norm < 1.0)) {
            continue;
        }
        let graph = build_graph(&forms, adj)?;
        let report = ratio_report(&graph, &forms, DwellMethod::Theorem2, tol)?;
        if best.as_ref().map_or(true, |(b, _)| report.bound_real < b.bound_real) {
            best = Some((report, forms));
        }
    }
    match (best, last_err) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) if policy != EpsilonPolicy::GridSearch => Err(e),
        _ => Err(DwellError::EpsilonSearchFailed),
    }
}

/// Average dwell time `τ > μ(G)/(−ln r)`, with `r = ρ_max` for eigenvector
/// forms and `r = max‖J_ε‖` when any form is a Jordan form.
pub fn avg_dwell(forms: &[ModalForm], adj: &Adjacency) -> Result<DwellReport, DwellError> {
    let graph = build_graph(forms, adj)?;
    let (rho_max, j_max_norm) = radii(forms);
    let (rate, method) = match j_max_norm {
        Some(j) => (j, DwellMethod::Theorem3Defective),
        None => (rho_max, DwellMethod::Theorem3),
    };
    let cert = max_cycle_mean(&graph);
    let bound_real = cert.as_ref().map_or(0.0, |c| c.value / loss_weight(rate));
    Ok(DwellReport {
        mode: DwellMode::Average,
        method,
        bound_real,
        tau_int: smallest_integer_above(bound_real),
        critical_cycle: cert.map(|c| c.cycle),
        rho_max: Some(rho_max),
        j_max_norm,
        gamma: transient_constant(forms)?,
        scaling: None,
        norm: None,
        epsilons: epsilons_of(forms),
    })
}
