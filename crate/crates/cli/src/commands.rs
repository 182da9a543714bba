//! Command implementations behind the binary.

use sha2::{Digest, Sha256};

use dwellgraph_core::analysis::{analyze, Analysis, AnalysisOptions, ModeSelection};
use dwellgraph_core::dwell::{DwellError, DwellMode, EpsilonPolicy};
use dwellgraph_core::numerics::{EigenTolerance, Norm, NumericsError};
use dwellgraph_core::simulation::{decay_trial, empirical_decay, DecayConfig, DecayStats, DwellConstraint, SimulationError};

use crate::report::{
    DiagnosticsEntry, GraphDump, InputEcho, MethodEntry, ReportFile, SimulationEntry, Winner, Winners,
};
use crate::spec::{norm_name, parse_spec, EpsilonSetting, SystemSpecFile};
use crate::CliError;

/// Overrides on top of the spec file's `[options]`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AnalyzeFlags {
    pub selection: ModeSelection,
    pub epsilon: Option<EpsilonSetting>,
    /// `Some(None)` selects every norm.
    pub norm: Option<Option<Norm>>,
    pub tol: Option<f64>,
    pub eigen_cluster_tol: Option<f64>,
    pub eigen_rank_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulateFlags {
    pub analyze: AnalyzeFlags,
    pub tau: u64,
    pub mode: DwellMode,
    /// Chatter bound of the average-dwell constraint.
    pub n0: u64,
    pub trials: usize,
    pub horizon: u64,
    pub seed: u64,
    /// Follow the critical cycle with dwell exactly `tau` instead of random signals.
    pub adversarial: bool,
}

impl Default for SimulateFlags {
    fn default() -> Self {
        Self {
            analyze: AnalyzeFlags::default(),
            tau: 1,
            mode: DwellMode::Minimum,
            n0: 1,
            trials: 100,
            horizon: 100,
            seed: 0,
            adversarial: false,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::InvalidArgument(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Spec options with the flags applied on top.
pub fn analysis_options(spec: &SystemSpecFile, flags: &AnalyzeFlags) -> Result<AnalysisOptions, CliError> {
    let mut opts = AnalysisOptions { selection: flags.selection, ..AnalysisOptions::default() };
    if let Some(t) = flags.tol.or(spec.options.tolerance) {
        opts.tol = positive("tolerance", t)?;
    }
    opts.epsilon = match flags.epsilon.or(spec.options.epsilon) {
        None | Some(EpsilonSetting::Auto) => EpsilonPolicy::Auto,
        Some(EpsilonSetting::Search) => EpsilonPolicy::GridSearch,
        Some(EpsilonSetting::Fixed(v)) => EpsilonPolicy::Fixed(positive("epsilon", v)?),
    };
    if let Some(norm) = flags.norm.unwrap_or(spec.options.norm) {
        opts.norms = vec![norm];
    }
    if let Some(v) = flags.eigen_cluster_tol {
        opts.eigen_tol.cluster = positive("eigenvalue cluster tolerance", v)?;
    }
    if let Some(v) = flags.eigen_rank_tol {
        opts.eigen_tol.rank = positive("rank tolerance", v)?;
    }
    Ok(opts)
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn echo(text: &str, spec: &SystemSpecFile, opts: &AnalysisOptions) -> InputEcho {
    let (epsilon, epsilon_value) = match opts.epsilon {
        EpsilonPolicy::Auto => ("auto", None),
        EpsilonPolicy::GridSearch => ("search", None),
        EpsilonPolicy::Fixed(v) => ("fixed", Some(v)),
    };
    let EigenTolerance { cluster, rank } = opts.eigen_tol;
    InputEcho {
        sha256: sha256_hex(text),
        dimension: spec.dimension,
        subsystems: spec.subsystems.iter().map(|s| s.name.clone()).collect(),
        selection: match opts.selection {
            ModeSelection::Minimum => "minimum",
            ModeSelection::Average => "average",
            ModeSelection::All => "all",
        }
        .to_owned(),
        tolerance: opts.tol,
        epsilon: epsilon.to_owned(),
        epsilon_value,
        norms: opts.norms.iter().map(|&n| norm_name(n).to_owned()).collect(),
        eigen_cluster_tol: cluster,
        eigen_rank_tol: rank,
        equilibration_rel_tol: opts.equilibration.rel_tol,
        equilibration_max_iters: opts.equilibration.max_iters,
    }
}

fn is_input_error(err: &NumericsError) -> bool {
    matches!(err, NumericsError::InvalidEpsilon(_) | NumericsError::NotSquare { .. } | NumericsError::NonFinite { .. })
}

fn dwell_error(err: DwellError, spec: &SystemSpecFile) -> CliError {
    if err.is_not_schur_stable() {
        let (index, rho) = match &err {
            DwellError::Subsystem { index, source: NumericsError::NotSchurStable { spectral_radius } } => {
                (*index, *spectral_radius)
            }
            _ => (0, f64::NAN),
        };
        return CliError::NotSchurStable { index: index + 1, name: spec.subsystems[index].name.clone(), rho };
    }
    let input = match &err {
        DwellError::EpsilonSearchFailed | DwellError::Graph(_) | DwellError::NotBimodal(_) => true,
        DwellError::Subsystem { source, .. } | DwellError::Numerics(source) => is_input_error(source),
        _ => false,
    };
    if input {
        return CliError::InvalidArgument(err.to_string());
    }
    let message = match (&err, err.subsystem()) {
        (DwellError::Subsystem { index, source }, _) => {
            format!("subsystem {} (`{}`): {source}", index + 1, spec.subsystems[*index].name)
        }
        (_, Some(i)) => format!("{err} (subsystem {} is `{}`)", i + 1, spec.subsystems[i].name),
        _ => err.to_string(),
    };
    CliError::Numerical(message)
}

fn simulation_error(err: SimulationError) -> CliError {
    match err {
        SimulationError::NoTrials | SimulationError::ZeroDwell | SimulationError::DimensionMismatch { .. } => {
            CliError::InvalidArgument(err.to_string())
        }
        _ => CliError::Numerical(err.to_string()),
    }
}

struct Prepared {
    spec: SystemSpecFile,
    analysis: Analysis,
    input: InputEcho,
}

fn prepare(text: &str, flags: &AnalyzeFlags) -> Result<Prepared, CliError> {
    let spec = parse_spec(text)?;
    let opts = analysis_options(&spec, flags)?;
    let analysis = analyze(&spec.system(), &opts).map_err(|e| dwell_error(e, &spec))?;
    let input = echo(text, &spec, &opts);
    Ok(Prepared { spec, analysis, input })
}

/// Cycle of the graph-based minimum-dwell method, or of the average one.
fn graph_cycle(a: &Analysis) -> Option<Vec<usize>> {
    a.reports.first().and_then(|r| r.critical_cycle.as_ref()).map(|c| c.nodes().to_vec())
}

fn build_report(p: &Prepared, simulation: Option<SimulationEntry>) -> ReportFile {
    let a = &p.analysis;
    let winner = |idx: Option<usize>| {
        idx.map(|i| Winner {
            method: a.reports[i].method.name().to_owned(),
            index: i + 1,
            tau_int: a.reports[i].tau_int.min(i64::MAX as u64),
            bound_real: a.reports[i].bound_real,
        })
    };
    ReportFile::new(
        p.input.clone(),
        Winners { minimum: winner(a.best_minimum), average: winner(a.best_average) },
        a.reports.iter().map(MethodEntry::from_report).collect(),
        DiagnosticsEntry::new(&a.diagnostics, graph_cycle(a).as_deref()),
        simulation,
    )
}

/// Every applicable certificate and the winner per mode.
pub fn cmd_analyze(text: &str, flags: &AnalyzeFlags) -> Result<ReportFile, CliError> {
    let p = prepare(text, flags)?;
    Ok(build_report(&p, None))
}

/// Switching graph weights and per-subsystem data.
pub fn cmd_graph(text: &str, flags: &AnalyzeFlags) -> Result<GraphDump, CliError> {
    let p = prepare(text, flags)?;
    Ok(GraphDump {
        input: p.input.clone(),
        diagnostics: DiagnosticsEntry::new(&p.analysis.diagnostics, graph_cycle(&p.analysis).as_deref()),
    })
}

fn decay_config(p: &Prepared, flags: &SimulateFlags) -> Result<DecayConfig, CliError> {
    if flags.trials == 0 {
        return Err(CliError::InvalidArgument("trials must be at least 1".into()));
    }
    if flags.tau == 0 {
        return Err(CliError::InvalidArgument("tau must be at least 1".into()));
    }
    if flags.horizon == 0 {
        return Err(CliError::InvalidArgument("horizon must be at least 1".into()));
    }
    let constraint = match flags.mode {
        DwellMode::Minimum => DwellConstraint::Minimum { tau: flags.tau },
        DwellMode::Average => DwellConstraint::Average { tau: flags.tau, n0: flags.n0 },
    };
    let adversarial = if flags.adversarial {
        let cycle = p.analysis.reports.first().and_then(|r| r.critical_cycle.clone());
        Some(cycle.ok_or_else(|| CliError::InvalidArgument("the switching graph has no cycle to follow".into()))?)
    } else {
        None
    };
    Ok(DecayConfig { constraint, trials: flags.trials, horizon: flags.horizon, seed: flags.seed, adversarial })
}

fn prepare_simulation(text: &str, flags: &SimulateFlags) -> Result<(Prepared, DecayConfig), CliError> {
    let analyze_flags = AnalyzeFlags { selection: ModeSelection::All, ..flags.analyze.clone() };
    let p = prepare(text, &analyze_flags)?;
    let config = decay_config(&p, flags)?;
    Ok((p, config))
}

/// Monte-Carlo decay run. Minimum-dwell trials are also checked against the
/// solution bound built from the analysis' modal forms.
pub fn cmd_simulate(text: &str, flags: &SimulateFlags) -> Result<(ReportFile, DecayStats), CliError> {
    let (p, config) = prepare_simulation(text, flags)?;
    let matrices = p.spec.matrices();
    let adj = p.spec.adjacency();
    let stats = empirical_decay(&matrices, &adj, &config, Some(&p.analysis.forms)).map_err(simulation_error)?;
    let n0 = (flags.mode == DwellMode::Average).then_some(flags.n0);
    let entry = SimulationEntry::new(&stats, flags.mode, flags.tau, n0, flags.adversarial);
    Ok((build_report(&p, Some(entry)), stats))
}

/// `‖x(t)‖` of the first `count` trials as whitespace-separated columns,
/// one row per time step.
pub fn norm_columns(text: &str, flags: &SimulateFlags, count: usize) -> Result<String, CliError> {
    let (p, config) = prepare_simulation(text, flags)?;
    let matrices = p.spec.matrices();
    let adj = p.spec.adjacency();
    let count = count.min(config.trials);
    let mut columns = Vec::with_capacity(count);
    for trial in 0..count {
        let (_, traj) = decay_trial(&matrices, &adj, &config, trial).map_err(simulation_error)?;
        columns.push(traj.norms);
    }
    let mut out = String::from("t");
    for trial in 0..count {
        out.push_str(&format!(" trial{}", trial + 1));
    }
    out.push('\n');
    for t in 0..=config.horizon as usize {
        out.push_str(&t.to_string());
        for c in &columns {
            out.push_str(&format!(" {:.12e}", c[t]));
        }
        out.push('\n');
    }
    Ok(out)
}
