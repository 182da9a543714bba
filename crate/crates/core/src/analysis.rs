//! Runs every applicable certificate on a switched system and picks the
//! smallest integer dwell time per mode.

use alloc::vec;
use alloc::vec::Vec;

use crate::dwell::{
    avg_dwell, bimodal_avg_dwell, bimodal_min_dwell_corollary1, bimodal_min_dwell_corollary2,
    bimodal_min_dwell_pnorm, min_dwell_defective, min_dwell_nondefective, BimodalPair, DwellError,
    DwellMode, DwellReport, EpsilonPolicy, EquilibrationSettings,
};
use crate::graph::{build_graph, transient_constant, Adjacency, GraphError, SwitchingGraph};
use crate::numerics::{
    eigendecompose, spectral_radius, EigenTolerance, ModalForm, ModalKind, Norm, NumericsError, PNorm,
    RealMatrix,
};

/// Subsystem matrices and the digraph of admissible transitions.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchedSystem {
    matrices: Vec<RealMatrix>,
    adjacency: Adjacency,
}

impl SwitchedSystem {
    pub fn new(matrices: Vec<RealMatrix>, adjacency: Adjacency) -> Result<Self, GraphError> {
        let m = adjacency.node_count();
        let dim = matrices.first().map_or(0, RealMatrix::dim);
        let bad_dim = matrices.iter().find(|a| a.dim() != dim).map(RealMatrix::dim);
        if matrices.len() != m || bad_dim.is_some() {
            return Err(GraphError::DimensionMismatch {
                expected: m,
                dim,
                found: matrices.len(),
                found_dim: bad_dim.unwrap_or(dim),
            });
        }
        Ok(Self { matrices, adjacency })
    }

    pub fn matrices(&self) -> &[RealMatrix] {
        &self.matrices
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    pub fn subsystem_count(&self) -> usize {
        self.matrices.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ModeSelection {
    Minimum,
    Average,
    #[default]
    All,
}

impl ModeSelection {
    pub fn includes(self, mode: DwellMode) -> bool {
        matches!(
            (self, mode),
            (ModeSelection::All, _)
                | (ModeSelection::Minimum, DwellMode::Minimum)
                | (ModeSelection::Average, DwellMode::Average)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    /// Absolute tolerance of the cycle-ratio search.
    pub tol: f64,
    pub eigen_tol: EigenTolerance,
    pub epsilon: EpsilonPolicy,
    /// Norms tried by the bimodal methods.
    pub norms: Vec<Norm>,
    pub equilibration: EquilibrationSettings,
    pub selection: ModeSelection,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            eigen_tol: EigenTolerance::default(),
            epsilon: EpsilonPolicy::Auto,
            norms: vec![Norm::Spectral, Norm::One, Norm::Infinity],
            equilibration: EquilibrationSettings::default(),
            selection: ModeSelection::All,
        }
    }
}

/// Per-subsystem data and the switching graph used by the graph methods.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    pub spectral_radii: Vec<f64>,
    pub kinds: Vec<ModalKind>,
    pub factor_norms: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub gamma: f64,
    pub graph: SwitchingGraph,
    /// Edges with `ω⁺ < 0`. Admissible, but worth a look.
    pub negative_gain_edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub reports: Vec<DwellReport>,
    pub best_minimum: Option<usize>,
    pub best_average: Option<usize>,
    pub forms: Vec<ModalForm>,
    pub diagnostics: Diagnostics,
}

impl Analysis {
    pub fn best(&self, mode: DwellMode) -> Option<&DwellReport> {
        let idx = match mode {
            DwellMode::Minimum => self.best_minimum,
            DwellMode::Average => self.best_average,
        };
        idx.map(|i| &self.reports[i])
    }
}

/// Fails with the first subsystem whose spectral radius is not below 1.
pub fn check_schur_stable(matrices: &[RealMatrix]) -> Result<Vec<f64>, DwellError> {
    matrices
        .iter()
        .enumerate()
        .map(|(index, a)| {
            let rho = spectral_radius(a);
            if rho < 1.0 {
                Ok(rho)
            } else {
                Err(DwellError::Subsystem { index, source: NumericsError::NotSchurStable { spectral_radius: rho } })
            }
        })
        .collect()
}

/// Eigenvector forms of every subsystem, or `None` when one is defective.
fn eigen_forms(matrices: &[RealMatrix], tol: &EigenTolerance) -> Result<Option<Vec<ModalForm>>, DwellError> {
    let mut forms = Vec::with_capacity(matrices.len());
    for (index, a) in matrices.iter().enumerate() {
        match eigendecompose(a, tol) {
            Ok(f) => forms.push(f),
            Err(NumericsError::Defective { .. }) => return Ok(None),
            Err(source) => return Err(DwellError::Subsystem { index, source }),
        }
    }
    Ok(Some(forms))
}

/// Eigenvector methods when every subsystem is diagonalizable, ε-Jordan
/// methods otherwise; bimodal refinements when there are two diagonalizable
/// subsystems that can switch both ways.
pub fn analyze(system: &SwitchedSystem, opts: &AnalysisOptions) -> Result<Analysis, DwellError> {
    let matrices = system.matrices();
    let adj = system.adjacency();
    let spectral_radii = check_schur_stable(matrices)?;

    let mut reports = Vec::new();
    let (forms, minimum) = match eigen_forms(matrices, &opts.eigen_tol)? {
        Some(forms) => {
            let r = min_dwell_nondefective(&forms, adj, opts.tol)?;
            (forms, r)
        }
        None => {
            let (r, forms) = min_dwell_defective(matrices, adj, opts.epsilon, &opts.eigen_tol, opts.tol)?;
            (forms, r)
        }
    };
    reports.push(minimum);
    reports.push(avg_dwell(&forms, adj)?);

    let nondefective = forms.iter().all(|f| f.kind == ModalKind::NonDefective);
    if nondefective && forms.len() == 2 && adj.contains(0, 1) && adj.contains(1, 0) {
        let pair = BimodalPair::from_forms(forms[0].clone(), forms[1].clone())?;
        for &norm in &opts.norms {
            match norm {
                Norm::Spectral => reports.push(bimodal_min_dwell_corollary1(&pair, &opts.equilibration)?),
                Norm::One | Norm::Infinity => {
                    let p = if norm == Norm::One { PNorm::One } else { PNorm::Infinity };
                    reports.push(bimodal_min_dwell_corollary2(&pair, p)?);
                    reports.push(bimodal_min_dwell_pnorm(&pair, p)?);
                }
            }
        }
        for &norm in &opts.norms {
            for scaled in [false, true] {
                reports.push(bimodal_avg_dwell(&pair, norm, scaled, &opts.equilibration)?);
            }
        }
    }
    reports.retain(|r| opts.selection.includes(r.mode));

    let graph = build_graph(&forms, adj)?;
    let diagnostics = Diagnostics {
        spectral_radii,
        kinds: forms.iter().map(|f| f.kind).collect(),
        factor_norms: forms.iter().map(|f| f.factor_norm).collect(),
        epsilons: forms.iter().map(|f| f.epsilon).collect(),
        gamma: transient_constant(&forms)?,
        negative_gain_edges: graph.negative_gain_edges(),
        graph,
    };
    Ok(Analysis {
        best_minimum: winner(&reports, DwellMode::Minimum),
        best_average: winner(&reports, DwellMode::Average),
        reports,
        forms,
        diagnostics,
    })
}

/// Smallest `tau_int`; ties keep the earlier report.
fn winner(reports: &[DwellReport], mode: DwellMode) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in reports.iter().enumerate().filter(|(_, r)| r.mode == mode) {
        if best.map_or(true, |b| r.tau_int < reports[b].tau_int) {
            best = Some(i);
        }
    }
    best
}
