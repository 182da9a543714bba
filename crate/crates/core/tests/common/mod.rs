//! Oracles and generators shared by the integration tests. Everything here is
//! computed independently of the library's decomposition and search code.
#![allow(dead_code)]

use dwellgraph_core::graph::{Adjacency, SwitchingGraph, WeightedEdge};
use dwellgraph_core::numerics::RealMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every simple cycle as a node list starting at its smallest node.
pub fn simple_cycles(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![vec![false; m]; m];
    for &(i, j) in edges {
        adj[i][j] = true;
    }
    let mut out = Vec::new();
    fn dfs(start: usize, v: usize, adj: &[Vec<bool>], path: &mut Vec<usize>, seen: &mut [bool], out: &mut Vec<Vec<usize>>) {
        for w in 0..adj.len() {
            if !adj[v][w] {
                continue;
            }
            if w == start {
                out.push(path.clone());
            } else if w > start && !seen[w] {
                seen[w] = true;
                path.push(w);
                dfs(start, w, adj, path, seen, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    for s in 0..m {
        let mut seen = vec![false; m];
        seen[s] = true;
        dfs(s, s, &adj, &mut vec![s], &mut seen, &mut out);
    }
    out
}

fn cycle_sums(g: &SwitchingGraph, c: &[usize]) -> (f64, f64) {
    let mut gain = 0.0;
    let mut loss = 0.0;
    for k in 0..c.len() {
        let e = g.edge(c[k], c[(k + 1) % c.len()]).expect("cycle edge");
        gain += e.gain;
        loss += e.loss;
    }
    (gain, loss)
}

/// Brute-force maximum cycle ratio, `None` when acyclic.
pub fn oracle_ratio(g: &SwitchingGraph) -> Option<f64> {
    let edges: Vec<_> = g.edges().iter().map(|e| (e.from, e.to)).collect();
    simple_cycles(g.node_count(), &edges)
        .iter()
        .map(|c| {
            let (a, b) = cycle_sums(g, c);
            a / b
        })
        .reduce(f64::max)
}

/// Brute-force maximum cycle mean, `None` when acyclic.
pub fn oracle_mean(g: &SwitchingGraph) -> Option<f64> {
    let edges: Vec<_> = g.edges().iter().map(|e| (e.from, e.to)).collect();
    simple_cycles(g.node_count(), &edges)
        .iter()
        .map(|c| cycle_sums(g, c).0 / c.len() as f64)
        .reduce(f64::max)
}

/// Random digraph on `m` nodes with gains in `[-1, 3]` and losses in `[0.1, 2]`.
pub fn random_graph(r: &mut ChaCha8Rng, m: usize, density: f64) -> SwitchingGraph {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j && r.random_bool(density) {
                edges.push(WeightedEdge { from: i, to: j, gain: r.random_range(-1.0..3.0), loss: r.random_range(0.1..2.0) });
            }
        }
    }
    SwitchingGraph::from_edges(m, edges).unwrap()
}

/// Largest singular value from the Hermitian eigenproblem of `MᴴM`.
pub fn two_norm(m: &CMat) -> f64 {
    let h = m.adjoint() * m;
    // embed the Hermitian matrix as a real symmetric one of twice the size
    let n = h.nrows();
    let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    SymmetricEigen::new(real).eigenvalues.iter().copied().fold(0.0, f64::max).max(0.0).sqrt()
}

/// Unit eigenvector of `a` for a simple eigenvalue `lambda`, by inverse iteration.
pub fn eigenvector(a: &DMatrix<f64>, lambda: Complex64) -> nalgebra::DVector<Complex64> {
    let n = a.nrows();
    let shift = lambda + Complex64::new(1e-10, 1e-10);
    let b = a.map(|x| Complex64::new(x, 0.0)) - CMat::identity(n, n) * shift;
    let lu = b.lu();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| Complex64::new(1.0 + i as f64 * 0.37, 0.1 * i as f64));
    for _ in 0..6 {
        v = lu.solve(&v).expect("shifted solve");
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
    }
    v
}

/// Unit-norm eigenvector matrix and spectral radius of a matrix with distinct eigenvalues.
pub fn eigenbasis(a: &RealMatrix) -> (CMat, f64) {
    let m = a.as_matrix();
    let eig = m.clone().schur().complex_eigenvalues();
    let n = m.nrows();
    let mut basis = CMat::zeros(n, n);
    for (k, &l) in eig.iter().enumerate() {
        basis.set_column(k, &eigenvector(m, l));
    }
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (basis, rho)
}

/// `ln‖V_j⁻¹V_i‖` and `−ln ρ_i` for every edge.
pub fn oracle_graph(matrices: &[RealMatrix], adj: &Adjacency) -> SwitchingGraph {
    let data: Vec<_> = matrices.iter().map(eigenbasis).collect();
    let edges = adj
        .edges()
        .map(|(i, j)| {
            let inv = data[j].0.clone().try_inverse().unwrap();
            WeightedEdge { from: i, to: j, gain: two_norm(&(inv * &data[i].0)).ln(), loss: -data[i].1.ln() }
        })
        .collect();
    SwitchingGraph::from_edges(matrices.len(), edges).unwrap()
}

pub fn mat(n: usize, v: &[f64]) -> RealMatrix {
    RealMatrix::from_row_slice(n, v).unwrap()
}

pub fn example1() -> Vec<RealMatrix> {
    let a = DMatrix::from_row_slice(3, 3, &[-0.2, 1.0, 0.0, -1.0, 1.4, 0.0, 0.0, 0.0, -0.4]);
    let (s, c) = (std::f64::consts::FRAC_PI_3.sin(), std::f64::consts::FRAC_PI_3.cos());
    let u = DMatrix::from_row_slice(3, 3, &[1.2, 0.0, 0.0, 0.0, c, s, 0.0, -s, c]);
    let ui = u.clone().try_inverse().unwrap();
    let mut out = Vec::new();
    let mut left = DMatrix::identity(3, 3);
    let mut right = DMatrix::identity(3, 3);
    for _ in 0..4 {
        out.push(RealMatrix::from_matrix(&left * &a * &right).unwrap());
        left = &ui * left;
        right = right * &u;
    }
    out
}

pub fn example2() -> Vec<RealMatrix> {
    vec![
        mat(3, &[-0.38, 0.2, 0.1, -0.16, 0.72, 0.16, -0.24, 0.24, 0.8]),
        mat(3, &[-0.8, -0.07, 0.04, 0.1, -1.0, 0.05, -0.1, -0.06, -0.34]),
    ]
}

/// Random `Q·diag(λ)·Q⁻¹` with real eigenvalues of modulus in `[lo, hi]`.
pub fn random_diagonalizable(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> RealMatrix {
    loop {
        let q = DMatrix::from_fn(n, n, |i, j| r.random_range(-1.0..1.0) + if i == j { 1.5 } else { 0.0 });
        let Some(qi) = q.clone().try_inverse() else { continue };
        if q.norm() * qi.norm() > 50.0 {
            continue;
        }
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| {
            let s = if r.random_bool(0.5) { 1.0 } else { -1.0 };
            s * r.random_range(lo..hi)
        }));
        return RealMatrix::from_matrix(&q * d * qi).unwrap();
    }
}

/// Random unitary from the QR factor of a complex Gaussian-like matrix.
pub fn random_unitary(r: &mut ChaCha8Rng, n: usize) -> CMat {
    let z = CMat::from_fn(n, n, |_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
    z.qr().q()
}

/// `Q·T_i·Q⁻¹` with a shared `Q` and upper triangular `T_i` whose diagonal
/// lies in `(−radius, radius)`.
pub fn triangularizable_pair(r: &mut ChaCha8Rng, n: usize, radius: f64) -> (RealMatrix, RealMatrix) {
    loop {
        let q = DMatrix::from_fn(n, n, |i, j| r.random_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 });
        let Some(qi) = q.clone().try_inverse() else { continue };
        let mut tri = || {
            let mut diag: Vec<f64> = Vec::new();
            while diag.len() < n {
                let d = r.random_range(-radius..radius);
                if diag.iter().all(|x: &f64| (x - d).abs() > 0.05) {
                    diag.push(d);
                }
            }
            DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => diag[i],
                std::cmp::Ordering::Less => r.random_range(-1.0..1.0),
                std::cmp::Ordering::Greater => 0.0,
            })
        };
        let (t1, t2) = (tri(), tri());
        return (
            RealMatrix::from_matrix(&q * t1 * &qi).unwrap(),
            RealMatrix::from_matrix(&q * t2 * &qi).unwrap(),
        );
    }
}

/// Real Jordan matrix from `(eigenvalue, block sizes)` groups.
pub fn jordan(groups: &[(f64, &[usize])]) -> DMatrix<f64> {
    let n: usize = groups.iter().flat_map(|(_, s)| s.iter()).sum();
    let mut j = DMatrix::zeros(n, n);
    let mut at = 0;
    for (lambda, sizes) in groups {
        for &k in *sizes {
            for i in 0..k {
                j[(at + i, at + i)] = *lambda;
                if i + 1 < k {
                    j[(at + i, at + i + 1)] = 1.0;
                }
            }
            at += k;
        }
    }
    j
}

/// Real Jordan form of a complex pair `r·e^{±iθ}` with two size-2 blocks.
pub fn complex_pair_block(r: f64, theta: f64) -> DMatrix<f64> {
    let (c, s) = (r * theta.cos(), r * theta.sin());
    DMatrix::from_row_slice(4, 4, &[c, -s, 1.0, 0.0, s, c, 0.0, 1.0, 0.0, 0.0, c, -s, 0.0, 0.0, s, c])
}

pub fn jordan_suite() -> Vec<(&'static str, DMatrix<f64>, usize)> {
    let mut pair_plus = DMatrix::zeros(6, 6);
    pair_plus.view_mut((0, 0), (4, 4)).copy_from(&complex_pair_block(0.7, 0.9));
    pair_plus.view_mut((4, 4), (2, 2)).copy_from(&jordan(&[(-0.3, &[2])]));
    vec![
        ("single 2-block", jordan(&[(0.5, &[2])]), 2),
        ("single 3-block", jordan(&[(-0.7, &[3])]), 3),
        ("single 4-block", jordan(&[(0.3, &[4])]), 4),
        ("derogatory 2+1", jordan(&[(0.6, &[2, 1])]), 2),
        ("derogatory 2+2", jordan(&[(0.4, &[2, 2])]), 2),
        ("mixed 3+1 and 2", jordan(&[(0.5, &[3, 1]), (-0.2, &[2])]), 3),
        ("mixed 4, 2, 1", jordan(&[(0.8, &[4]), (0.1, &[2]), (-0.5, &[1])]), 4),
        ("complex pair blocks", complex_pair_block(0.6, 1.1), 2),
        ("complex pair and real block", pair_plus, 2),
        ("two 4-blocks", jordan(&[(0.5, &[4, 4])]), 4),
        ("n = 8 mix", jordan(&[(0.7, &[3, 2]), (-0.4, &[2]), (0.0, &[1])]), 3),
        ("nilpotent", jordan(&[(0.0, &[3])]), 3),
    ]
}

pub fn similarity(r: &mut ChaCha8Rng, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    loop {
        let q = DMatrix::from_fn(n, n, |i, j| r.random_range(-0.5..0.5) + if i == j { 1.0 } else { 0.0 });
        if let Some(qi) = q.clone().try_inverse() {
            if q.norm() * qi.norm() < 30.0 {
                return (q, qi);
            }
        }
    }
}
