//! One PASS/FAIL line per acceptance criterion.
//!
//! Exits 0 after printing, so `cargo test` goes on to the remaining suites;
//! set `ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::time::{Duration, Instant};

use common::*;
use dwellgraph::examples::generate_example;
use dwellgraph::spec::{AdjacencySpec, SystemSpecFile};
use dwellgraph::{cmd_analyze, render_spec, AnalyzeFlags};
use dwellgraph_core::analysis::{analyze, AnalysisOptions, ModeSelection};
use dwellgraph_core::cycles::{max_cycle_mean, max_cycle_ratio};
use dwellgraph_core::dwell::{
    bimodal_min_dwell_corollary1, bimodal_min_dwell_corollary2, bimodal_min_dwell_pnorm, bimodal_pair,
    min_dwell_defective, min_dwell_nondefective, BimodalPair, DwellMethod, DwellMode, EpsilonPolicy,
    EquilibrationSettings,
};
use dwellgraph_core::graph::{build_graph, Adjacency};
use dwellgraph_core::numerics::{eigendecompose, modal_form, EigenTolerance, ModalForm, ModalKind, PNorm, RealMatrix};
use dwellgraph_core::simulation::{empirical_decay, DecayConfig, DwellConstraint};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn run(id: u32, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    let pass = out.pass && in_time;
    println!(
        "{} criterion {id}: {title}: {}; {:.2} s (limit {} s{})",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", exceeded" },
    );
    pass
}

fn spec_text(spec: &SystemSpecFile) -> String {
    render_spec(spec)
}

fn min_flags() -> AnalyzeFlags {
    AnalyzeFlags { selection: ModeSelection::Minimum, ..Default::default() }
}

fn criterion1() -> Outcome {
    let want = [7u64, 7, 5];
    let mut got = Vec::new();
    for adj in [AdjacencySpec::Full, AdjacencySpec::Ring, AdjacencySpec::Ring2] {
        let text = spec_text(&generate_example("example1", Some(adj)).unwrap());
        let report = cmd_analyze(&text, &min_flags()).unwrap();
        got.push(report.method("theorem1").unwrap().tau_int);
    }
    Outcome {
        pass: got == want,
        detail: format!(
            "theorem1 tau_int G1={} G2={} G3={}, expected {} {} {} (exact)",
            got[0], got[1], got[2], want[0], want[1], want[2]
        ),
    }
}

fn criterion2() -> Outcome {
    let text = spec_text(&generate_example("example2", None).unwrap());
    let report = cmd_analyze(&text, &min_flags()).unwrap();
    let t1 = report.method("theorem1").unwrap();
    let c1 = report.method("corollary1").unwrap();
    Outcome {
        pass: t1.tau_int == 7 && c1.tau_int == 1,
        detail: format!(
            "theorem1 tau_int={} (bound {:.4}), corollary1 tau_int={} (bound {:.4}), expected 7 and 1 (exact)",
            t1.tau_int, t1.bound_real, c1.tau_int, c1.bound_real
        ),
    }
}

fn criterion3() -> Outcome {
    let mut r = rng(3003);
    let (mut worst_ratio, mut worst_mean, mut mismatched) = (0.0f64, 0.0f64, 0);
    for _ in 0..100 {
        let m = r.random_range(1..=6);
        let density = r.random_range(0.2..1.0);
        let g = random_graph(&mut r, m, density);
        let ratio = max_cycle_ratio(&g, 1e-9).unwrap().map(|c| c.value);
        let mean = max_cycle_mean(&g).map(|c| c.value);
        for (got, want, worst) in [(ratio, oracle_ratio(&g), &mut worst_ratio), (mean, oracle_mean(&g), &mut worst_mean)] {
            match (got, want) {
                (Some(a), Some(b)) => *worst = worst.max((a - b).abs()),
                (None, None) => {}
                _ => mismatched += 1,
            }
        }
    }
    Outcome {
        pass: worst_ratio <= 1e-9 && worst_mean <= 1e-9 && mismatched == 0,
        detail: format!(
            "100 graphs, max |Δratio|={worst_ratio:.1e}, max |Δmean|={worst_mean:.1e}, existence mismatches={mismatched} (tol 1e-9)"
        ),
    }
}

fn eigen_forms(mats: &[RealMatrix]) -> Vec<ModalForm> {
    mats.iter().map(|a| eigendecompose(a, &EigenTolerance::default()).unwrap()).collect()
}

/// The random systems of criterion 4, fully connected.
fn criterion4_systems() -> Vec<Vec<RealMatrix>> {
    let mut r = rng(4004);
    (0..20)
        .map(|_| {
            let m = r.random_range(2..=4);
            let n = r.random_range(2..=4);
            (0..m).map(|_| random_diagonalizable(&mut r, n, 0.1, 0.95)).collect()
        })
        .collect()
}

fn criterion4() -> Outcome {
    let mut r = rng(4005);
    let (mut worst_w, mut worst_b) = (0.0f64, 0.0f64);
    for mats in criterion4_systems() {
        let n = mats[0].dim();
        let adj = Adjacency::fully_connected(mats.len()).unwrap();
        let forms = eigen_forms(&mats);
        let rotated: Vec<ModalForm> = forms
            .iter()
            .map(|f| {
                let mut g = f.clone();
                g.basis = &f.basis * random_unitary(&mut r, n);
                g
            })
            .collect();
        let (a, b) = (build_graph(&forms, &adj).unwrap(), build_graph(&rotated, &adj).unwrap());
        for (x, y) in a.edges().iter().zip(b.edges()) {
            worst_w = worst_w.max((x.gain - y.gain).abs()).max((x.loss - y.loss).abs());
        }
        let ba = min_dwell_nondefective(&forms, &adj, 1e-12).unwrap().bound_real;
        let bb = min_dwell_nondefective(&rotated, &adj, 1e-12).unwrap().bound_real;
        worst_b = worst_b.max((ba - bb).abs());
    }
    Outcome {
        pass: worst_w < 1e-10 && worst_b < 1e-9,
        detail: format!("20 systems, max |Δweight|={worst_w:.1e} (tol 1e-10), max |Δbound_real|={worst_b:.1e} (tol 1e-9)"),
    }
}

/// The triangularizable pairs of criterion 5.
fn criterion5_pairs() -> Vec<[RealMatrix; 2]> {
    let mut r = rng(5005);
    (0..50)
        .map(|_| {
            let n = r.random_range(2..=5);
            let (a1, a2) = triangularizable_pair(&mut r, n, 0.8);
            [a1, a2]
        })
        .collect()
}

fn criterion5() -> Outcome {
    let mut worst = 0.0f64;
    for [a1, a2] in criterion5_pairs() {
        let pair = bimodal_pair(&a1, &a2, &EigenTolerance::default()).unwrap();
        for p in [PNorm::One, PNorm::Infinity] {
            worst = worst.max(bimodal_min_dwell_corollary2(&pair, p).unwrap().bound_real.abs());
        }
    }
    Outcome { pass: worst <= 1e-9, detail: format!("50 pairs, max |corollary2 bound_real|={worst:.1e} (tol 1e-9)") }
}

/// Conjugated Jordan test matrices, four variants per structure.
fn criterion6_matrices() -> Vec<(String, RealMatrix)> {
    let mut r = rng(6006);
    let mut out = Vec::new();
    for (name, j, _) in jordan_suite() {
        let n = j.nrows();
        for variant in 0..4 {
            let a = if variant == 0 {
                j.clone()
            } else {
                let (q, qi) = similarity(&mut r, n);
                &q * &j * qi
            };
            out.push((format!("{name}/{variant}"), RealMatrix::from_matrix(a).unwrap()));
        }
    }
    out
}

/// Adjacent same-size matrices of the Jordan suite as bimodal systems.
fn criterion6_pairs() -> Vec<[RealMatrix; 2]> {
    let mats = criterion6_matrices();
    mats.windows(2).filter(|w| w[0].1.dim() == w[1].1.dim()).map(|w| [w[0].1.clone(), w[1].1.clone()]).collect()
}

fn criterion6() -> Outcome {
    let tol = EigenTolerance::default();
    let (mut worst_rec, mut worst_norm, mut bad) = (0.0f64, 0.0f64, Vec::new());
    let mats = criterion6_matrices();
    for (name, a) in &mats {
        match modal_form(a, None, &tol) {
            Ok(f) if f.kind == ModalKind::Jordan => {
                let rel = f.reconstruction_error(a).unwrap() / a.as_matrix().norm().max(1.0);
                worst_rec = worst_rec.max(rel);
                worst_norm = worst_norm.max(f.factor_norm);
            }
            Ok(_) => bad.push(format!("{name}: not detected as defective")),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let pairs = criterion6_pairs();
    let adj = Adjacency::fully_connected(2).unwrap();
    let mut infinite = 0;
    for p in &pairs {
        match min_dwell_defective(p, &adj, EpsilonPolicy::Auto, &tol, 1e-9) {
            Ok((rep, _)) if rep.bound_real.is_finite() => {}
            _ => infinite += 1,
        }
    }
    if let Some(first) = bad.first() {
        println!("    criterion 6 detail: {first}");
    }
    Outcome {
        pass: bad.is_empty() && worst_rec <= 1e-8 && worst_norm < 1.0 && infinite == 0,
        detail: format!(
            "{} matrices, max relative reconstruction error={worst_rec:.1e} (tol 1e-8), max ‖J_ε‖={worst_norm:.4} (< 1), \
             {} theorem2 pairs with {infinite} non-finite, {} failures",
            mats.len(),
            pairs.len(),
            bad.len()
        ),
    }
}

struct Certified {
    name: String,
    matrices: Vec<RealMatrix>,
    adj: Adjacency,
    tau: u64,
    /// Forms whose switching graph carries the winning certificate.
    forms: Vec<ModalForm>,
}

fn certify(name: String, matrices: Vec<RealMatrix>, adj: Adjacency) -> Certified {
    let system = dwellgraph_core::analysis::SwitchedSystem::new(matrices.clone(), adj.clone()).unwrap();
    let opts = AnalysisOptions { selection: ModeSelection::Minimum, ..Default::default() };
    let a = analyze(&system, &opts).unwrap();
    let best = a.best(DwellMode::Minimum).unwrap();
    let forms = match (&best.method, &best.scaling) {
        (DwellMethod::Corollary1, Some(scaling)) => {
            let pair = BimodalPair::from_forms(a.forms[0].clone(), a.forms[1].clone()).unwrap();
            pair.scaled_forms(scaling).to_vec()
        }
        _ => a.forms.clone(),
    };
    Certified { name, matrices, adj, tau: best.tau_int, forms }
}

fn certified_systems() -> Vec<Certified> {
    let mut out = Vec::new();
    for (label, adj) in [("G1", AdjacencySpec::Full), ("G2", AdjacencySpec::Ring), ("G3", AdjacencySpec::Ring2)] {
        let spec = generate_example("example1", Some(adj)).unwrap();
        out.push(certify(format!("example1/{label}"), spec.matrices(), spec.adjacency()));
    }
    let spec = generate_example("example2", None).unwrap();
    out.push(certify("example2".into(), spec.matrices(), spec.adjacency()));
    for (i, mats) in criterion4_systems().into_iter().enumerate() {
        let adj = Adjacency::fully_connected(mats.len()).unwrap();
        out.push(certify(format!("random/{i}"), mats, adj));
    }
    for (i, pair) in criterion5_pairs().into_iter().enumerate() {
        out.push(certify(format!("triangularizable/{i}"), pair.to_vec(), Adjacency::fully_connected(2).unwrap()));
    }
    for (i, pair) in criterion6_pairs().into_iter().enumerate() {
        out.push(certify(format!("jordan/{i}"), pair.to_vec(), Adjacency::fully_connected(2).unwrap()));
    }
    out
}

fn criterion7() -> Outcome {
    let systems = certified_systems();
    let (mut violations, mut worst_ratio, mut worst_name, mut decay_failures) = (0usize, 0.0f64, String::new(), 0);
    for (i, s) in systems.iter().enumerate() {
        let config = DecayConfig {
            constraint: DwellConstraint::Minimum { tau: s.tau },
            trials: 1000,
            horizon: 100 * s.tau,
            seed: 7000 + i as u64,
            adversarial: None,
        };
        let stats = empirical_decay(&s.matrices, &s.adj, &config, Some(&s.forms)).unwrap();
        violations += stats.bound_violations.unwrap();
        if stats.max_final_ratio >= 1e-6 {
            decay_failures += 1;
        }
        if stats.max_final_ratio > worst_ratio {
            worst_ratio = stats.max_final_ratio;
            worst_name = format!("{} (tau {})", s.name, s.tau);
        }
    }
    Outcome {
        pass: violations == 0 && decay_failures == 0,
        detail: format!(
            "{} systems x 1000 trials, bound violations={violations}, systems with ‖x(T)‖/‖x(0)‖ >= 1e-6: {decay_failures}, \
             worst ratio {worst_ratio:.1e} at {worst_name}",
            systems.len()
        ),
    }
}

fn criterion8() -> Outcome {
    let mut r = rng(8008);
    let settings = EquilibrationSettings::default();
    let adj = Adjacency::fully_connected(2).unwrap();
    let (mut worst_c1, mut worst_c2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for _ in 0..50 {
        let n = r.random_range(2..=5);
        let mats = [random_diagonalizable(&mut r, n, 0.1, 0.95), random_diagonalizable(&mut r, n, 0.1, 0.95)];
        let pair = bimodal_pair(&mats[0], &mats[1], &EigenTolerance::default()).unwrap();
        let t1 = min_dwell_nondefective(&eigen_forms(&mats), &adj, 1e-12).unwrap();
        let c1 = bimodal_min_dwell_corollary1(&pair, &settings).unwrap();
        worst_c1 = worst_c1.max(c1.bound_real - t1.bound_real);
        for p in [PNorm::One, PNorm::Infinity] {
            let c2 = bimodal_min_dwell_corollary2(&pair, p).unwrap();
            let pn = bimodal_min_dwell_pnorm(&pair, p).unwrap();
            worst_c2 = worst_c2.max(c2.bound_real - pn.bound_real);
        }
    }
    Outcome {
        pass: worst_c1 <= 1e-9 && worst_c2 <= 1e-9,
        detail: format!(
            "50 pairs, max(corollary1 − theorem1)={worst_c1:.2e}, max(corollary2 − pnorm)={worst_c2:.2e} (tol 1e-9)"
        ),
    }
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, "Example 1 minimum dwell per graph", s(1), criterion1),
        run(2, "Example 2 theorem1 and corollary1", s(1), criterion2),
        run(3, "cycle optimization vs enumeration oracle", s(10), criterion3),
        run(4, "unitary invariance", s(10), criterion4),
        run(5, "triangularizable bimodal pairs", s(10), criterion5),
        run(6, "Jordan decomposition suite", s(10), criterion6),
        run(7, "certified-dwell simulation", s(60), criterion7),
        run(8, "refinement ordering", s(10), criterion8),
    ];
    let failed: Vec<String> = (1..).zip(results).filter(|(_, p)| !p).map(|(i, _)| i.to_string()).collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failing criteria: {}", failed.join(", "));
        if std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
            std::process::exit(1);
        }
    }
}
