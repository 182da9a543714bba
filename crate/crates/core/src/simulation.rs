//! Admissible switching signals, trajectory simulation and Monte-Carlo checks
//! of the dwell-time certificates.
//!
//! Randomness is a ChaCha8 stream per trial (`seed`, stream = trial index),
//! so runs are reproducible bit-for-bit and trials are independent.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::cycles::Cycle;
use crate::graph::{transient_constant, Adjacency, GraphError};
use crate::numerics::{spectral_norm, ModalForm, NumericsError, RealMatrix};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SimulationError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("signal not admissible: {0}")]
    SignalNotAdmissible(SignalViolation),
    #[error("at least one trial is required")]
    NoTrials,
    #[error("dwell time must be positive")]
    ZeroDwell,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SignalViolation {
    #[error("signal is empty or does not start at t = 0")]
    Malformed,
    #[error("switching times not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("mode {mode} at index {index} is not a subsystem")]
    UnknownMode { index: usize, mode: usize },
    #[error("transition {from} -> {to} at index {index} is not an edge")]
    NotAnEdge { index: usize, from: usize, to: usize },
    #[error("dwell {dwell} before switching {index} is below {tau}")]
    DwellTooShort { index: usize, dwell: u64, tau: u64 },
    #[error("{count} switchings before t = {t} exceed N0 + t/tau")]
    TooManySwitchings { t: u64, count: u64 },
}

/// Piecewise-constant switching signal: `modes[k]` is active on
/// `switch_times[k] .. switch_times[k+1]`, the last one until the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchingSignal {
    pub switch_times: Vec<u64>,
    pub modes: Vec<usize>,
    pub horizon: u64,
}

impl SwitchingSignal {
    pub fn constant(mode: usize, horizon: u64) -> Self {
        Self { switch_times: vec![0], modes: vec![mode], horizon }
    }

    /// Number of switchings (excluding the start).
    pub fn switch_count(&self) -> usize {
        self.modes.len().saturating_sub(1)
    }

    /// Mode active at time `t`.
    pub fn mode_at(&self, t: u64) -> usize {
        let k = self.switch_times.partition_point(|&s| s <= t);
        self.modes[k.max(1) - 1]
    }

    /// Modes for `t = 0 .. horizon`.
    pub fn expand(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.horizon as usize);
        for (k, &mode) in self.modes.iter().enumerate() {
            let end = self.switch_times.get(k + 1).copied().unwrap_or(self.horizon).min(self.horizon);
            let start = self.switch_times[k].min(end);
            out.extend(core::iter::repeat(mode).take((end - start) as usize));
        }
        out
    }
}

/// Dwell-time class a signal is generated for or checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DwellConstraint {
    /// Consecutive switchings at least `tau` apart.
    Minimum { tau: u64 },
    /// At most `n0 + t/tau` switchings strictly before every `t ≤ horizon`.
    Average { tau: u64, n0: u64 },
}

impl DwellConstraint {
    pub fn tau(self) -> u64 {
        match self {
            DwellConstraint::Minimum { tau } | DwellConstraint::Average { tau, .. } => tau,
        }
    }
}

/// Checks a signal against the digraph and the dwell constraint. Kept apart
/// from the generator so generated signals are verified, not trusted.
pub fn validate_signal(signal: &SwitchingSignal, adj: &Adjacency, constraint: DwellConstraint) -> Result<(), SignalViolation> {
    let SwitchingSignal { switch_times: times, modes, horizon } = signal;
    if times.is_empty() || times.len() != modes.len() || times[0] != 0 {
        return Err(SignalViolation::Malformed);
    }
    for (index, &mode) in modes.iter().enumerate() {
        if mode >= adj.node_count() {
            return Err(SignalViolation::UnknownMode { index, mode });
        }
    }
    for k in 1..times.len() {
        if times[k] <= times[k - 1] {
            return Err(SignalViolation::NotIncreasing(k));
        }
        if !adj.contains(modes[k - 1], modes[k]) {
            return Err(SignalViolation::NotAnEdge { index: k, from: modes[k - 1], to: modes[k] });
        }
    }
    match constraint {
        DwellConstraint::Minimum { tau } => {
            for k in 1..times.len() {
                let dwell = times[k] - times[k - 1];
                if dwell < tau {
                    return Err(SignalViolation::DwellTooShort { index: k, dwell, tau });
                }
            }
        }
        DwellConstraint::Average { tau, n0 } => {
            // N(t) only grows right after a switching, so those t are the binding ones
            for (count, &s) in times.iter().enumerate().skip(1) {
                let t = s + 1;
                if t <= *horizon && (count as u64) * tau > n0 * tau + t {
                    return Err(SignalViolation::TooManySwitchings { t, count: count as u64 });
                }
            }
        }
    }
    Ok(())
}

fn start_node(adj: &Adjacency, rng: &mut ChaCha8Rng) -> Option<usize> {
    let starts: Vec<usize> = (0..adj.node_count()).filter(|&i| adj.successors(i).next().is_some()).collect();
    starts.choose(rng).copied()
}

fn next_node(adj: &Adjacency, from: usize, rng: &mut ChaCha8Rng) -> Option<usize> {
    let succ: Vec<usize> = adj.successors(from).collect();
    succ.choose(rng).copied()
}

fn generate_with(adj: &Adjacency, constraint: DwellConstraint, horizon: u64, rng: &mut ChaCha8Rng) -> SwitchingSignal {
    let Some(mut mode) = start_node(adj, rng) else {
        return SwitchingSignal::constant(0, horizon);
    };
    let mut signal = SwitchingSignal::constant(mode, horizon);
    match constraint {
        DwellConstraint::Minimum { tau } => {
            let mut t = 0u64;
            loop {
                t += rng.random_range(tau..=3 * tau);
                if t >= horizon {
                    break;
                }
                let Some(next) = next_node(adj, mode, rng) else { break };
                signal.switch_times.push(t);
                signal.modes.push(next);
                mode = next;
            }
        }
        DwellConstraint::Average { tau, n0 } => {
            let mut count = 0u64;
            for t in 1..horizon {
                // a switching at t is counted from t + 1 on
                if (count + 1) * tau > n0 * tau + t + 1 || !rng.random_bool(0.5) {
                    continue;
                }
                let Some(next) = next_node(adj, mode, rng) else { break };
                signal.switch_times.push(t);
                signal.modes.push(next);
                mode = next;
                count += 1;
            }
        }
    }
    signal
}

/// Random admissible signal. Minimum dwell: each dwell uniform on
/// `[tau, 3·tau]`. Average dwell: a fair coin decides at every step whether
/// to switch, whenever switching keeps the count within `n0 + t/tau`.
/// The start node is uniform over nodes with an outgoing edge.
pub fn generate_signal(adj: &Adjacency, constraint: DwellConstraint, horizon: u64, seed: u64) -> SwitchingSignal {
    generate_with(adj, constraint, horizon, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Walks `cycle` forever, dwelling exactly `tau` in every mode.
pub fn cycle_signal(cycle: &Cycle, tau: u64, horizon: u64) -> SwitchingSignal {
    let nodes = cycle.nodes();
    let mut signal = SwitchingSignal::constant(nodes[0], horizon);
    if nodes.len() < 2 || tau == 0 {
        return signal;
    }
    let mut t = tau;
    let mut k = 1;
    while t < horizon {
        signal.switch_times.push(t);
        signal.modes.push(nodes[k % nodes.len()]);
        t += tau;
        k += 1;
    }
    signal
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub states: Vec<DVector<f64>>,
    pub norms: Vec<f64>,
}

/// Iterates `x(t+1) = A_σ(t) x(t)` for `t = 0 .. steps`. Past the signal's
/// horizon the last mode stays active.
pub fn simulate(matrices: &[RealMatrix], signal: &SwitchingSignal, x0: &[f64], steps: u64) -> Result<Trajectory, SimulationError> {
    propagate(matrices, signal, x0, steps, true)
}

/// [`simulate`], optionally without storing the states.
fn propagate(
    matrices: &[RealMatrix],
    signal: &SwitchingSignal,
    x0: &[f64],
    steps: u64,
    keep_states: bool,
) -> Result<Trajectory, SimulationError> {
    let n = x0.len();
    if let Some(bad) = matrices.iter().find(|a| a.dim() != n) {
        return Err(SimulationError::DimensionMismatch { expected: n, found: bad.dim() });
    }
    if let Some(&mode) = signal.modes.iter().find(|&&m| m >= matrices.len()) {
        return Err(SimulationError::SignalNotAdmissible(SignalViolation::UnknownMode { index: 0, mode }));
    }
    let mut x = DVector::from_column_slice(x0);
    let mut next = DVector::zeros(n);
    let mut states = Vec::with_capacity(if keep_states { steps as usize + 1 } else { 0 });
    let mut norms = Vec::with_capacity(steps as usize + 1);
    norms.push(x.norm());
    if keep_states {
        states.push(x.clone());
    }
    let mut k = 0;
    for t in 0..steps {
        while k + 1 < signal.switch_times.len() && signal.switch_times[k + 1] <= t {
            k += 1;
        }
        next.gemv(1.0, matrices[signal.modes[k]].as_matrix(), &x, 0.0);
        core::mem::swap(&mut x, &mut next);
        norms.push(x.norm());
        if keep_states {
            states.push(x.clone());
        }
    }
    Ok(Trajectory { states, norms })
}

/// Outcome of checking `‖x(t_n)‖ ≤ γ·e^{α(n)}·‖x(0)‖` at every switching.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub gamma: f64,
    /// `γ·e^{α(n)}·‖x(0)‖ − ‖x(t_n)‖` for `n = 1, 2, …`.
    pub margins: Vec<f64>,
    pub violations: usize,
}

/// Slack added to every bound to absorb rounding.
pub const BOUND_SLACK: f64 = 1e-9;

/// Precomputed pieces of the solution bound: `γ`, the gain `ln‖V_j⁻¹V_i‖` of
/// every ordered pair and `ln‖factor_i‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionBound {
    pub gamma: f64,
    gains: Vec<Vec<f64>>,
    log_factors: Vec<f64>,
}

impl SolutionBound {
    pub fn new(forms: &[ModalForm]) -> Result<Self, SimulationError> {
        let gamma = transient_constant(forms)?;
        let inverses = forms.iter().map(ModalForm::basis_inverse).collect::<Result<Vec<_>, _>>()?;
        let gains = forms
            .iter()
            .map(|from| inverses.iter().map(|inv| libm::log(spectral_norm(&(inv * &from.basis)))).collect())
            .collect();
        let log_factors = forms.iter().map(|f| libm::log(f.factor_norm)).collect();
        Ok(Self { gamma, gains, log_factors })
    }

    /// Checks the bound at each switching instant of a minimum-dwell signal,
    /// with `α(n) = Σ_{k≤n} (ω⁺(σ_k → σ_{k+1}) + tau·ln‖factor_{σ_k}‖)`.
    pub fn check(&self, signal: &SwitchingSignal, trajectory: &Trajectory, tau: u64) -> Result<BoundCheck, SimulationError> {
        let times = &signal.switch_times;
        let modes = &signal.modes;
        let m = self.gains.len();
        if times.is_empty() || times.len() != modes.len() || times[0] != 0 {
            return Err(SimulationError::SignalNotAdmissible(SignalViolation::Malformed));
        }
        for k in 1..times.len() {
            if times[k] <= times[k - 1] {
                return Err(SimulationError::SignalNotAdmissible(SignalViolation::NotIncreasing(k)));
            }
            if times[k] - times[k - 1] < tau {
                let dwell = times[k] - times[k - 1];
                return Err(SimulationError::SignalNotAdmissible(SignalViolation::DwellTooShort { index: k, dwell, tau }));
            }
            if modes[k] == modes[k - 1] || modes[k] >= m || modes[k - 1] >= m {
                return Err(SimulationError::SignalNotAdmissible(SignalViolation::NotAnEdge {
                    index: k,
                    from: modes[k - 1],
                    to: modes[k],
                }));
            }
        }
        let x0 = trajectory.norms[0];
        let mut alpha = 0.0;
        let mut margins = Vec::new();
        let mut violations = 0;
        for k in 1..times.len() {
            let t = times[k] as usize;
            if t >= trajectory.norms.len() {
                break;
            }
            let (from, to) = (modes[k - 1], modes[k]);
            alpha += self.gains[from][to] + tau as f64 * self.log_factors[from];
            let margin = self.gamma * libm::exp(alpha) * x0 + BOUND_SLACK - trajectory.norms[t];
            if margin < 0.0 {
                violations += 1;
            }
            margins.push(margin - BOUND_SLACK);
        }
        Ok(BoundCheck { gamma: self.gamma, margins, violations })
    }
}

/// [`SolutionBound::check`] for a single signal.
pub fn verify_bound(forms: &[ModalForm], signal: &SwitchingSignal, trajectory: &Trajectory, tau: u64) -> Result<BoundCheck, SimulationError> {
    SolutionBound::new(forms)?.check(signal, trajectory, tau)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayConfig {
    pub constraint: DwellConstraint,
    pub trials: usize,
    pub horizon: u64,
    pub seed: u64,
    /// Replace the random signal of every trial by the walk around this cycle
    /// with dwell exactly `tau`.
    pub adversarial: Option<Cycle>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayStats {
    pub trials: usize,
    pub seed: u64,
    pub horizon: u64,
    /// `‖x(T)‖/‖x(0)‖` per trial.
    pub final_ratios: Vec<f64>,
    /// `max_t ‖x(t)‖/‖x(0)‖` per trial.
    pub peak_amplifications: Vec<f64>,
    pub max_final_ratio: f64,
    pub switchings: usize,
    /// Solution-bound violations; `None` without forms or for average dwell.
    pub bound_violations: Option<usize>,
}

fn initial_state(n: usize, trial: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if trial < n {
        let mut e = vec![0.0; n];
        e[trial] = 1.0;
        return e;
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn run_trial(
    matrices: &[RealMatrix],
    adj: &Adjacency,
    config: &DecayConfig,
    n: usize,
    trial: usize,
    keep_states: bool,
) -> Result<(SwitchingSignal, Trajectory), SimulationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let signal = match &config.adversarial {
        Some(cycle) => cycle_signal(cycle, config.constraint.tau(), config.horizon),
        None => generate_with(adj, config.constraint, config.horizon, &mut rng),
    };
    validate_signal(&signal, adj, config.constraint).map_err(SimulationError::SignalNotAdmissible)?;
    let x0 = initial_state(n, trial, &mut rng);
    let traj = propagate(matrices, &signal, &x0, config.horizon, keep_states)?;
    Ok((signal, traj))
}

/// Signal and trajectory of one trial of [`empirical_decay`], for inspection.
pub fn decay_trial(
    matrices: &[RealMatrix],
    adj: &Adjacency,
    config: &DecayConfig,
    trial: usize,
) -> Result<(SwitchingSignal, Trajectory), SimulationError> {
    if config.constraint.tau() == 0 {
        return Err(SimulationError::ZeroDwell);
    }
    let n = matrices.first().map_or(0, RealMatrix::dim);
    run_trial(matrices, adj, config, n, trial, true)
}

/// Monte-Carlo decay run. Trial `i` uses stream `i` of `seed`; the first `n`
/// trials start from the basis directions, the others from uniform points on
/// the unit sphere. With `forms`, minimum-dwell trials are also checked
/// against the solution bound.
pub fn empirical_decay(
    matrices: &[RealMatrix],
    adj: &Adjacency,
    config: &DecayConfig,
    forms: Option<&[ModalForm]>,
) -> Result<DecayStats, SimulationError> {
    if config.trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    if config.constraint.tau() == 0 {
        return Err(SimulationError::ZeroDwell);
    }
    let n = matrices.first().map_or(0, RealMatrix::dim);
    let mut final_ratios = Vec::with_capacity(config.trials);
    let mut peaks = Vec::with_capacity(config.trials);
    let mut switchings = 0;
    let mut violations = 0;
    let bound = match (forms, config.constraint) {
        (Some(forms), DwellConstraint::Minimum { .. }) => Some(SolutionBound::new(forms)?),
        _ => None,
    };
    for trial in 0..config.trials {
        let (signal, traj) = run_trial(matrices, adj, config, n, trial, false)?;
        let x0_norm = traj.norms[0];
        final_ratios.push(traj.norms[traj.norms.len() - 1] / x0_norm);
        peaks.push(traj.norms.iter().fold(0.0f64, |m, &v| m.max(v / x0_norm)));
        switchings += signal.switch_count();
        if let Some(bound) = &bound {
            violations += bound.check(&signal, &traj, config.constraint.tau())?.violations;
        }
    }
    let max_final_ratio = final_ratios.iter().copied().fold(0.0, f64::max);
    Ok(DecayStats {
        trials: config.trials,
        seed: config.seed,
        horizon: config.horizon,
        final_ratios,
        peak_amplifications: peaks,
        max_final_ratio,
        switchings,
        bound_violations: bound.map(|_| violations),
    })
}

/// `A_{σ(T−1)} ⋯ A_{σ(0)}`, the state-transition matrix of a signal.
pub fn transition_matrix(matrices: &[RealMatrix], signal: &SwitchingSignal, steps: u64) -> DMatrix<f64> {
    let n = matrices[0].dim();
    let mut phi = DMatrix::identity(n, n);
    for t in 0..steps {
        phi = matrices[signal.mode_at(t)].as_matrix() * phi;
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigendecompose, EigenTolerance};

    fn m(n: usize, v: &[f64]) -> RealMatrix {
        RealMatrix::from_row_slice(n, v).unwrap()
    }

    #[test]
    fn min_dwell_signal_is_admissible() {
        let adj = Adjacency::fully_connected(4).unwrap();
        for seed in 0..50 {
            let s = generate_signal(&adj, DwellConstraint::Minimum { tau: 5 }, 50, seed);
            assert_eq!(validate_signal(&s, &adj, DwellConstraint::Minimum { tau: 5 }), Ok(()));
            assert!(s.switch_count() <= 10);
        }
    }

    #[test]
    fn one_sided_ring_is_followed() {
        let adj = Adjacency::ring(4, false).unwrap();
        let s = generate_signal(&adj, DwellConstraint::Minimum { tau: 2 }, 200, 3);
        for w in s.modes.windows(2) {
            assert_eq!(w[1], (w[0] + 1) % 4);
        }
    }

    #[test]
    fn average_dwell_unconstrained_when_tau_one() {
        let adj = Adjacency::fully_connected(3).unwrap();
        let c = DwellConstraint::Average { tau: 1, n0: 0 };
        let s = generate_signal(&adj, c, 400, 11);
        assert_eq!(validate_signal(&s, &adj, c), Ok(()));
        assert!(s.switch_times.windows(2).any(|w| w[1] - w[0] == 1));
    }

    #[test]
    fn average_dwell_respects_budget() {
        let adj = Adjacency::fully_connected(3).unwrap();
        for (tau, n0) in [(3, 0), (5, 2), (10, 4)] {
            let c = DwellConstraint::Average { tau, n0 };
            let s = generate_signal(&adj, c, 300, tau + n0);
            assert_eq!(validate_signal(&s, &adj, c), Ok(()));
        }
    }

    #[test]
    fn validator_rejects_bad_signals() {
        let adj = Adjacency::ring(3, false).unwrap();
        let c = DwellConstraint::Minimum { tau: 2 };
        let s = SwitchingSignal { switch_times: vec![0, 1], modes: vec![0, 1], horizon: 10 };
        assert!(matches!(validate_signal(&s, &adj, c), Err(SignalViolation::DwellTooShort { .. })));
        let s = SwitchingSignal { switch_times: vec![0, 5], modes: vec![0, 2], horizon: 10 };
        assert!(matches!(validate_signal(&s, &adj, c), Err(SignalViolation::NotAnEdge { .. })));
        let c = DwellConstraint::Average { tau: 4, n0: 0 };
        let s = SwitchingSignal { switch_times: vec![0, 1], modes: vec![0, 1], horizon: 10 };
        assert!(matches!(validate_signal(&s, &adj, c), Err(SignalViolation::TooManySwitchings { .. })));
    }

    #[test]
    fn scalar_decay() {
        let a = m(2, &[0.5, 0.0, 0.0, 0.5]);
        let s = SwitchingSignal::constant(0, 10);
        let tr = simulate(&[a], &s, &[1.0, 0.0], 10).unwrap();
        for (t, v) in tr.norms.iter().enumerate() {
            assert!((v - 0.5f64.powi(t as i32)).abs() < 1e-15);
        }
        let tr = simulate(&[m(1, &[0.3])], &s, &[2.0], 0).unwrap();
        assert_eq!(tr.states.len(), 1);
    }

    #[test]
    fn simulation_matches_product() {
        let mats = [m(2, &[0.5, 0.4, -0.1, 0.3]), m(2, &[-0.2, 0.0, 0.7, 0.6])];
        let adj = Adjacency::fully_connected(2).unwrap();
        let s = generate_signal(&adj, DwellConstraint::Minimum { tau: 2 }, 30, 5);
        let tr = simulate(&mats, &s, &[0.3, -1.0], 30).unwrap();
        let want = transition_matrix(&mats, &s, 30) * DVector::from_column_slice(&[0.3, -1.0]);
        assert!((&tr.states[30] - want).norm() < 1e-10);
    }

    #[test]
    fn dimension_mismatch() {
        let s = SwitchingSignal::constant(0, 3);
        assert_eq!(
            simulate(&[m(2, &[0.1, 0.0, 0.0, 0.1])], &s, &[1.0], 3),
            Err(SimulationError::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn identical_modes_bound_decreases() {
        let a = m(2, &[0.6, 0.2, 0.0, -0.3]);
        let f = eigendecompose(&a, &EigenTolerance::default()).unwrap();
        let forms = [f.clone(), f];
        let s = cycle_signal(&Cycle::new(vec![0, 1]), 3, 30);
        let tr = simulate(&[a.clone(), a], &s, &[1.0, 1.0], 30).unwrap();
        let check = verify_bound(&forms, &s, &tr, 3).unwrap();
        assert_eq!(check.violations, 0);
        assert!(check.margins.len() >= 9);
    }

    #[test]
    fn reproducible_runs() {
        let mats = [m(2, &[0.5, 0.4, -0.1, 0.3]), m(2, &[-0.2, 0.0, 0.7, 0.6])];
        let adj = Adjacency::fully_connected(2).unwrap();
        let cfg = DecayConfig {
            constraint: DwellConstraint::Minimum { tau: 3 },
            trials: 20,
            horizon: 60,
            seed: 9,
            adversarial: None,
        };
        let a = empirical_decay(&mats, &adj, &cfg, None).unwrap();
        let b = empirical_decay(&mats, &adj, &cfg, None).unwrap();
        assert_eq!(a, b);
        let zero = DecayConfig { trials: 0, ..cfg };
        assert_eq!(empirical_decay(&mats, &adj, &zero, None), Err(SimulationError::NoTrials));
    }
}
