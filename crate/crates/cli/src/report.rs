//! Report files written by `analyze`, `simulate` and `graph`.
//!
//! Reports are TOML. Subsystem indices and cycle nodes are 1-based. Every
//! scalar also appears in the `[flat]` table under a dotted key.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use dwellgraph_core::analysis::Diagnostics;
use dwellgraph_core::dwell::{DwellMode, DwellReport};
use dwellgraph_core::numerics::ModalKind;
use dwellgraph_core::simulation::DecayStats;

use crate::spec::norm_name;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("report parse error: {0}")]
pub struct ReportError(String);

/// Inputs and every tolerance the result depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEcho {
    /// SHA-256 of the spec file bytes.
    pub sha256: String,
    pub dimension: usize,
    pub subsystems: Vec<String>,
    pub selection: String,
    pub tolerance: f64,
    /// `auto`, `search` or `fixed`.
    pub epsilon: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_value: Option<f64>,
    pub norms: Vec<String>,
    pub eigen_cluster_tol: f64,
    pub eigen_rank_tol: f64,
    pub equilibration_rel_tol: f64,
    pub equilibration_max_iters: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Winner {
    pub method: String,
    /// 1-based position in the method list.
    pub index: usize,
    pub tau_int: u64,
    pub bound_real: f64,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Winners {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimum: Option<Winner>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average: Option<Winner>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEntry {
    pub name: String,
    /// `minimum` or `average`.
    pub mode: String,
    pub bound_real: f64,
    pub tau_int: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_cycle: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max_norm: Option<f64>,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_left: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaling_right: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: usize,
    pub to: usize,
    /// `ω⁺`, 12 significant digits.
    pub w_plus: f64,
    /// `ω⁻`, 12 significant digits.
    pub w_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsEntry {
    pub spectral_radii: Vec<f64>,
    /// `non_defective` or `jordan` per subsystem.
    pub kinds: Vec<String>,
    /// `‖Λ_i‖` or `‖J_ε,i‖`.
    pub factor_norms: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_cycle: Option<Vec<usize>>,
    pub negative_gain_edges: Vec<[usize; 2]>,
    pub edge: Vec<EdgeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationEntry {
    /// `minimum` or `average`.
    pub mode: String,
    pub tau: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    pub trials: usize,
    pub horizon: u64,
    pub seed: u64,
    pub adversarial: bool,
    pub max_final_ratio: f64,
    pub median_final_ratio: f64,
    pub max_peak_amplification: f64,
    pub switchings: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub input: InputEcho,
    #[serde(default)]
    pub winner: Winners,
    #[serde(default, rename = "method", skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<MethodEntry>,
    pub diagnostics: DiagnosticsEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationEntry>,
    #[serde(default)]
    pub flat: BTreeMap<String, toml::Value>,
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float")
}

fn one_based(nodes: &[usize]) -> Vec<usize> {
    nodes.iter().map(|v| v + 1).collect()
}

fn clamp_tau(tau: u64) -> u64 {
    tau.min(i64::MAX as u64)
}

pub fn mode_name(mode: DwellMode) -> &'static str {
    match mode {
        DwellMode::Minimum => "minimum",
        DwellMode::Average => "average",
    }
}

impl MethodEntry {
    pub fn from_report(r: &DwellReport) -> Self {
        MethodEntry {
            name: r.method.name().to_owned(),
            mode: mode_name(r.mode).to_owned(),
            bound_real: r.bound_real,
            tau_int: clamp_tau(r.tau_int),
            critical_cycle: r.critical_cycle.as_ref().map(|c| one_based(c.nodes())),
            rho_max: r.rho_max,
            j_max_norm: r.j_max_norm,
            gamma: r.gamma,
            norm: r.norm.map(|n| norm_name(n).to_owned()),
            scaling_left: r.scaling.as_ref().map(|s| s.left.clone()),
            scaling_right: r.scaling.as_ref().map(|s| s.right.clone()),
            epsilons: (!r.epsilons.is_empty()).then(|| r.epsilons.clone()),
        }
    }
}

impl DiagnosticsEntry {
    pub fn new(d: &Diagnostics, critical_cycle: Option<&[usize]>) -> Self {
        DiagnosticsEntry {
            spectral_radii: d.spectral_radii.clone(),
            kinds: d
                .kinds
                .iter()
                .map(|k| match k {
                    ModalKind::NonDefective => "non_defective",
                    ModalKind::Jordan => "jordan",
                })
                .map(str::to_owned)
                .collect(),
            factor_norms: d.factor_norms.clone(),
            epsilons: d.epsilons.clone(),
            gamma: d.gamma,
            critical_cycle: critical_cycle.map(one_based),
            negative_gain_edges: d.negative_gain_edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            edge: d
                .graph
                .edges()
                .iter()
                .map(|e| EdgeEntry { from: e.from + 1, to: e.to + 1, w_plus: sig12(e.gain), w_minus: sig12(e.loss) })
                .collect(),
        }
    }
}

impl SimulationEntry {
    pub fn new(stats: &DecayStats, mode: DwellMode, tau: u64, n0: Option<u64>, adversarial: bool) -> Self {
        let mut sorted = stats.final_ratios.clone();
        sorted.sort_by(f64::total_cmp);
        let median = match sorted.len() {
            0 => 0.0,
            k if k % 2 == 1 => sorted[k / 2],
            k => 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]),
        };
        SimulationEntry {
            mode: mode_name(mode).to_owned(),
            tau,
            n0,
            trials: stats.trials,
            horizon: stats.horizon,
            seed: stats.seed,
            adversarial,
            max_final_ratio: stats.max_final_ratio,
            median_final_ratio: median,
            max_peak_amplification: stats.peak_amplifications.iter().copied().fold(0.0, f64::max),
            switchings: stats.switchings,
            bound_violations: stats.bound_violations,
        }
    }
}

fn int(v: impl TryInto<i64>) -> toml::Value {
    toml::Value::Integer(v.try_into().unwrap_or(i64::MAX))
}

impl ReportFile {
    pub fn new(
        input: InputEcho,
        winner: Winners,
        methods: Vec<MethodEntry>,
        diagnostics: DiagnosticsEntry,
        simulation: Option<SimulationEntry>,
    ) -> Self {
        let mut r = ReportFile { input, winner, methods, diagnostics, simulation, flat: BTreeMap::new() };
        r.flat = r.flatten();
        r
    }

    /// Scalars of the report under dotted keys.
    pub fn flatten(&self) -> BTreeMap<String, toml::Value> {
        use toml::Value::{Boolean, Float, String as Str};
        let mut f = BTreeMap::new();
        f.insert("input.sha256".into(), Str(self.input.sha256.clone()));
        f.insert("input.tolerance".into(), Float(self.input.tolerance));
        for (mode, w) in [("minimum", &self.winner.minimum), ("average", &self.winner.average)] {
            if let Some(w) = w {
                f.insert(format!("winner.{mode}.method"), Str(w.method.clone()));
                f.insert(format!("winner.{mode}.tau_int"), int(w.tau_int));
                f.insert(format!("winner.{mode}.bound_real"), Float(w.bound_real));
            }
        }
        for (i, m) in self.methods.iter().enumerate() {
            let k = format!("method.{}", i + 1);
            f.insert(format!("{k}.name"), Str(m.name.clone()));
            f.insert(format!("{k}.mode"), Str(m.mode.clone()));
            f.insert(format!("{k}.tau_int"), int(m.tau_int));
            f.insert(format!("{k}.bound_real"), Float(m.bound_real));
            if let Some(n) = &m.norm {
                f.insert(format!("{k}.norm"), Str(n.clone()));
            }
            f.insert(format!("{k}.scaled"), Boolean(m.scaling_left.is_some() || m.name == "corollary2"));
        }
        let d = &self.diagnostics;
        f.insert("diagnostics.gamma".into(), Float(d.gamma));
        for (i, (rho, norm)) in d.spectral_radii.iter().zip(&d.factor_norms).enumerate() {
            f.insert(format!("diagnostics.subsystem.{}.rho", i + 1), Float(*rho));
            f.insert(format!("diagnostics.subsystem.{}.factor_norm", i + 1), Float(*norm));
        }
        for e in &d.edge {
            f.insert(format!("diagnostics.edge.{}-{}.w_plus", e.from, e.to), Float(e.w_plus));
            f.insert(format!("diagnostics.edge.{}-{}.w_minus", e.from, e.to), Float(e.w_minus));
        }
        if let Some(s) = &self.simulation {
            f.insert("simulation.mode".into(), Str(s.mode.clone()));
            f.insert("simulation.tau".into(), int(s.tau));
            f.insert("simulation.trials".into(), int(s.trials));
            f.insert("simulation.horizon".into(), int(s.horizon));
            f.insert("simulation.seed".into(), int(s.seed));
            f.insert("simulation.max_final_ratio".into(), Float(s.max_final_ratio));
            f.insert("simulation.switchings".into(), int(s.switchings));
            if let Some(v) = s.bound_violations {
                f.insert("simulation.bound_violations".into(), int(v));
            }
        }
        f
    }

    pub fn method(&self, name: &str) -> Option<&MethodEntry> {
        self.methods.iter().find(|m| m.name == name)
    }
}

pub fn render_report(r: &ReportFile) -> String {
    toml::to_string(r).expect("report serializes")
}

pub fn parse_report(text: &str) -> Result<ReportFile, ReportError> {
    toml::from_str(text).map_err(|e| ReportError(e.to_string()))
}

/// `graph` output: the switching graph and its per-subsystem data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDump {
    pub input: InputEcho,
    pub diagnostics: DiagnosticsEntry,
}

pub fn render_graph(g: &GraphDump) -> String {
    toml::to_string(g).expect("graph dump serializes")
}
