//! Eigen and ε-scaled Jordan decompositions of subsystem matrices.
//!
//! Eigenvalues come from the real Schur form. Computed eigenvalues of a
//! Jordan block of size `k` scatter on a circle of radius roughly
//! `(u·‖A‖)^(1/k)` around the true value, so clustering uses a
//! size-dependent radius. Each cluster is then resolved with rank tests on
//! `A − λ̄I` (and its powers) evaluated at the cluster mean `λ̄`, which is
//! accurate even when the individual members are not.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;

use super::matrix::{
    condition_number, invert, spectral_norm, spectral_radius, ComplexMatrix, Norm, RealMatrix,
    BREAKDOWN_RCOND,
};
use super::NumericsError;

/// Relative reconstruction error accepted for any decomposition.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// Tolerances for cluster detection and numerical rank.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenTolerance {
    /// Eigenvalues closer than `cluster · max(1, ρ)` always share a cluster.
    pub cluster: f64,
    /// Singular values below `rank · ‖A‖` count as zero.
    pub rank: f64,
}

impl Default for EigenTolerance {
    fn default() -> Self {
        Self { cluster: 1e-7, rank: 1e-9 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModalKind {
    NonDefective,
    Jordan,
}

/// One Jordan block of the factor: `size` consecutive basis columns forming a chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanBlock {
    pub eigenvalue: Complex64,
    pub size: usize,
}

/// Similarity decomposition `A = basis · factor · basis⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalForm {
    pub kind: ModalKind,
    pub basis: ComplexMatrix,
    pub factor: ComplexMatrix,
    pub spectral_radius: f64,
    pub factor_norm: f64,
    pub epsilon: f64,
    pub blocks: Vec<JordanBlock>,
}

impl ModalForm {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis_inverse(&self) -> Result<ComplexMatrix, NumericsError> {
        invert(&self.basis)
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix, NumericsError> {
        Ok(&self.basis * &self.factor * self.basis_inverse()?)
    }

    /// `‖basis·factor·basis⁻¹ − A‖` in the spectral norm.
    pub fn reconstruction_error(&self, a: &RealMatrix) -> Result<f64, NumericsError> {
        Ok(spectral_norm(&(self.reconstruct()? - a.to_complex())))
    }
}

/// Computed spectral data shared by both decompositions.
struct Spectrum {
    a: ComplexMatrix,
    norm_a: f64,
    clusters: Vec<Cluster>,
}

#[derive(Clone, Debug)]
struct Cluster {
    mean: Complex64,
    size: usize,
    /// Orthonormal basis of `null(A − λ̄I)`, one column per eigenvector.
    eigenspace: Vec<DVector<Complex64>>,
}

fn size_radius(k: usize, base: f64, norm_a: f64) -> f64 {
    if k <= 1 {
        return base;
    }
    let scaled = 10.0 * libm::pow(100.0 * f64::EPSILON * norm_a.max(1.0), 1.0 / k as f64);
    base.max(scaled)
}

fn diameter(eigs: &[Complex64], members: &[usize]) -> f64 {
    let mut d: f64 = 0.0;
    for (x, &i) in members.iter().enumerate() {
        for &j in &members[x + 1..] {
            d = d.max((eigs[i] - eigs[j]).norm());
        }
    }
    d
}

/// Groups eigenvalue indices into clusters, largest first. A candidate of
/// size `k` is a seed plus its `k − 1` nearest unassigned neighbours; it is
/// kept when its diameter fits the size-`k` radius and `accept` confirms it.
fn cluster_indices(
    eigs: &[Complex64],
    base: f64,
    norm_a: f64,
    accept: impl Fn(&[usize]) -> bool,
) -> Vec<Vec<usize>> {
    let n = eigs.len();
    let mut free: Vec<usize> = (0..n).collect();
    let mut groups = Vec::new();
    for k in (2..=n).rev() {
        loop {
            if free.len() < k {
                break;
            }
            let mut best: Option<(Vec<usize>, f64)> = None;
            for &seed in &free {
                let mut near = free.clone();
                near.sort_by(|&i, &j| (eigs[i] - eigs[seed]).norm().total_cmp(&(eigs[j] - eigs[seed]).norm()));
                near.truncate(k);
                let d = diameter(eigs, &near);
                if d <= size_radius(k, base, norm_a) && best.as_ref().map_or(true, |(_, bd)| d < *bd) && accept(&near) {
                    best = Some((near, d));
                }
            }
            let Some((members, _)) = best else { break };
            free.retain(|i| !members.contains(i));
            groups.push(members);
        }
    }
    groups.extend(free.into_iter().map(|i| vec![i]));
    groups
}

fn mean_of(eigs: &[Complex64], members: &[usize]) -> Complex64 {
    let sum: Complex64 = members.iter().map(|&i| eigs[i]).sum();
    sum / members.len() as f64
}

fn shifted(a: &ComplexMatrix, shift: Complex64) -> ComplexMatrix {
    let mut b = a.clone();
    for i in 0..b.nrows() {
        b[(i, i)] -= shift;
    }
    b
}

/// Right singular vectors for the `count` smallest singular values, plus all
/// singular values in descending order.
fn smallest_right_singular(m: &ComplexMatrix, count: usize) -> (Vec<DVector<Complex64>>, Vec<f64>) {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let n = order.len();
    let vecs = order[n - count..]
        .iter()
        .rev()
        .map(|&i| v_t.row(i).adjoint().into_owned())
        .collect();
    (vecs, sv)
}

fn nullity(sv: &[f64], threshold: f64) -> usize {
    sv.iter().filter(|&&s| s <= threshold).count()
}

/// Rotates a vector so its largest-modulus component is real and positive.
fn phase_factor(v: &DVector<Complex64>) -> Complex64 {
    let mut best = Complex64::new(0.0, 0.0);
    for z in v.iter() {
        if z.norm() > best.norm() * (1.0 + 1e-12) {
            best = *z;
        }
    }
    if best.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        best.conj() / best.norm()
    }
}

fn analyze_spectrum(a: &RealMatrix, tol: &EigenTolerance) -> Result<Spectrum, NumericsError> {
    let eigs = a.eigenvalues();
    let rho = eigs.iter().map(|l| l.norm()).fold(0.0, f64::max);
    if !(rho < 1.0) {
        return Err(NumericsError::NotSchurStable { spectral_radius: rho });
    }
    let ac = a.to_complex();
    let norm_a = spectral_norm(&ac);
    let rank_thr = tol.rank * norm_a;
    let base = tol.cluster * rho.max(1.0);

    let scale = norm_a.max(1.0);
    // a size-k cluster needs a generalized eigenspace of dimension k at its mean
    let accept = |members: &[usize]| {
        let k = members.len();
        let b = shifted(&ac, mean_of(&eigs, members));
        let mut bk = b.clone();
        for _ in 1..k {
            bk = &bk * &b;
        }
        let (_, sv) = smallest_right_singular(&bk, 1);
        nullity(&sv, tol.rank * libm::pow(scale, k as f64)) >= k
    };
    let mut pending = cluster_indices(&eigs, base, norm_a, accept);
    let mut clusters = Vec::new();
    while let Some(members) = pending.pop() {
        let mean = mean_of(&eigs, &members);
        let b = shifted(&ac, mean);
        let (_, sv) = smallest_right_singular(&b, 1);
        let g = nullity(&sv, rank_thr);
        if g == 0 && members.len() > 1 {
            // no common eigenvector at the mean: the members are genuinely distinct
            pending.extend(members.into_iter().map(|i| vec![i]));
            continue;
        }
        let g = g.clamp(1, members.len());
        let (eigenspace, _) = smallest_right_singular(&b, g);
        clusters.push(Cluster { mean, size: members.len(), eigenspace });
    }
    clusters.sort_by(|x, y| {
        y.mean
            .re
            .total_cmp(&x.mean.re)
            .then_with(|| y.mean.im.total_cmp(&x.mean.im))
    });
    Ok(Spectrum { a: ac, norm_a, clusters })
}

fn check_reconstruction(
    spec: &Spectrum,
    basis: &ComplexMatrix,
    factor: &ComplexMatrix,
) -> Result<(), NumericsError> {
    let rcond = 1.0 / condition_number(basis, Norm::Spectral)?;
    if rcond <= BREAKDOWN_RCOND {
        return Err(NumericsError::Singular { rcond });
    }
    let inv = invert(basis)?;
    let err = spectral_norm(&(basis * factor * inv - &spec.a));
    if err > RECONSTRUCTION_TOL * spec.norm_a.max(1.0) {
        return Err(NumericsError::Reconstruction { error: err });
    }
    Ok(())
}

/// Unit-norm eigenvector decomposition of a non-defective Schur-stable matrix.
///
/// Eigenvectors of an eigenvalue repeated to tolerance are orthonormal, and
/// every column is rotated so its largest-modulus entry is real positive.
pub fn eigendecompose(a: &RealMatrix, tol: &EigenTolerance) -> Result<ModalForm, NumericsError> {
    let spec = analyze_spectrum(a, tol)?;
    let n = a.dim();
    let mut basis = ComplexMatrix::zeros(n, n);
    let mut diag = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    let mut col = 0;
    for c in &spec.clusters {
        if c.eigenspace.len() < c.size {
            return Err(NumericsError::Defective {
                eigenvalue: c.mean,
                algebraic: c.size,
                geometric: c.eigenspace.len(),
            });
        }
        for v in &c.eigenspace {
            let v = v * phase_factor(v);
            basis.set_column(col, &v);
            diag.push(c.mean);
            blocks.push(JordanBlock { eigenvalue: c.mean, size: 1 });
            col += 1;
        }
    }
    let factor = ComplexMatrix::from_diagonal(&DVector::from_vec(diag));
    check_reconstruction(&spec, &basis, &factor).map_err(|e| match e {
        // an ill-conditioned eigenbasis means hidden Jordan structure
        NumericsError::Singular { .. } | NumericsError::Reconstruction { .. } => {
            let worst = spec.clusters.iter().max_by_key(|c| c.size).expect("nonempty spectrum");
            NumericsError::Defective {
                eigenvalue: worst.mean,
                algebraic: worst.size,
                geometric: worst.eigenspace.len(),
            }
        }
        other => other,
    })?;
    let rho = spec.clusters.iter().map(|c| c.mean.norm()).fold(0.0, f64::max);
    Ok(ModalForm {
        kind: ModalKind::NonDefective,
        basis,
        factor,
        spectral_radius: rho,
        factor_norm: rho,
        epsilon: 0.0,
        blocks,
    })
}

/// Orthonormal basis of the span of `cols`, dropping directions below `drop_tol`.
fn orthonormalize(cols: &[DVector<Complex64>], drop_tol: f64) -> Vec<DVector<Complex64>> {
    let mut q: Vec<DVector<Complex64>> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for _ in 0..2 {
            for u in &q {
                let proj = u.dotc(&v);
                v -= u * proj;
            }
        }
        let nv = v.norm();
        if nv > drop_tol * c.norm().max(1.0) {
            q.push(v / Complex64::new(nv, 0.0));
        }
    }
    q
}

/// Jordan chains of a nilpotent `m x m` matrix, each listed from eigenvector upward.
fn nilpotent_chains(
    nil: &ComplexMatrix,
    thresholds: impl Fn(usize) -> f64,
) -> Result<Vec<Vec<DVector<Complex64>>>, NumericsError> {
    let m = nil.nrows();
    // null-space dimension of nil^k for k = 0..=depth
    let mut dims = vec![0usize];
    let mut nulls: Vec<Vec<DVector<Complex64>>> = vec![Vec::new()];
    let mut power = ComplexMatrix::identity(m, m);
    for k in 1..=m {
        power = &power * nil;
        let (_, sv) = smallest_right_singular(&power, 1);
        let d = nullity(&sv, thresholds(k)).max(dims[k - 1]);
        let (basis, _) = smallest_right_singular(&power, d.max(1));
        dims.push(d);
        nulls.push(if d == 0 { Vec::new() } else { basis });
        if d == m {
            break;
        }
    }
    let depth = dims.len() - 1;
    if dims[depth] != m || dims[1] == 0 {
        return Err(NumericsError::ChainFailure { reason: "generalized eigenspace is not nilpotent at rank tolerance" });
    }

    // (top vector, length)
    let mut tops: Vec<(DVector<Complex64>, usize)> = Vec::new();
    for k in (1..=depth).rev() {
        let at_least_k = dims[k] - dims[k - 1];
        let existing = tops.len();
        if at_least_k < existing {
            return Err(NumericsError::ChainFailure { reason: "inconsistent Weyr characteristic" });
        }
        let fresh = at_least_k - existing;
        if fresh == 0 {
            continue;
        }
        let mut span: Vec<DVector<Complex64>> = nulls[k - 1].clone();
        for (top, len) in &tops {
            let mut v = top.clone();
            for _ in 0..(len - k) {
                v = nil * v;
            }
            span.push(v);
        }
        let q = orthonormalize(&span, 1e-10);
        let mut resid = ComplexMatrix::zeros(m, nulls[k].len());
        for (j, x) in nulls[k].iter().enumerate() {
            let mut v = x.clone();
            for u in &q {
                let proj = u.dotc(&v);
                v -= u * proj;
            }
            resid.set_column(j, &v);
        }
        // left singular vectors as resid·v/σ; the U factor of a rank-deficient
        // complex SVD is not reliable
        let svd = resid.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        if order.len() < fresh || svd.singular_values[order[fresh - 1]] < 1e-6 {
            return Err(NumericsError::ChainFailure { reason: "new chain tops are not independent" });
        }
        for &i in &order[..fresh] {
            let u = &resid * v_t.row(i).adjoint();
            let norm = u.norm();
            tops.push((u / Complex64::new(norm, 0.0), k));
        }
    }

    let chains = tops
        .into_iter()
        .map(|(top, len)| {
            let mut chain = vec![top];
            for _ in 1..len {
                let next = nil * chain.last().unwrap();
                chain.push(next);
            }
            chain.reverse();
            chain
        })
        .collect();
    Ok(chains)
}

/// ε-scaled Jordan decomposition `A = P_ε · J_ε · P_ε⁻¹`.
///
/// Every chain `p₀, p₁, …` satisfies `(A − λI)p_k = p_{k−1}` with `p₀` a unit
/// eigenvector; it enters the basis as `p₀, ε p₁, ε² p₂, …` so the factor
/// carries `ε` on its superdiagonal.
pub fn jordan_decompose(a: &RealMatrix, eps: f64, tol: &EigenTolerance) -> Result<ModalForm, NumericsError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(NumericsError::InvalidEpsilon(eps));
    }
    let spec = analyze_spectrum(a, tol)?;
    let n = a.dim();
    let scale = spec.norm_a.max(1.0);
    let mut basis = ComplexMatrix::zeros(n, n);
    let mut factor = ComplexMatrix::zeros(n, n);
    let mut blocks = Vec::new();
    let mut col = 0;

    for c in &spec.clusters {
        let chains: Vec<Vec<DVector<Complex64>>> = if c.size == 1 || c.eigenspace.len() == c.size {
            c.eigenspace.iter().map(|v| vec![v.clone()]).collect()
        } else {
            let b = shifted(&spec.a, c.mean);
            let mut bm = ComplexMatrix::identity(n, n);
            for _ in 0..c.size {
                bm = &bm * &b;
            }
            let (w, sv) = smallest_right_singular(&bm, c.size);
            if sv[n - c.size] > tol.rank * libm::pow(scale, c.size as f64) {
                return Err(NumericsError::ChainFailure { reason: "generalized eigenspace dimension below multiplicity" });
            }
            let mut wm = ComplexMatrix::zeros(n, c.size);
            for (j, v) in w.iter().enumerate() {
                wm.set_column(j, v);
            }
            let nil = wm.adjoint() * &b * &wm;
            let local = nilpotent_chains(&nil, |k| tol.rank * libm::pow(scale, k as f64))?;
            local
                .into_iter()
                .map(|chain| chain.into_iter().map(|v| &wm * v).collect())
                .collect()
        };
        for chain in chains {
            let head = &chain[0];
            let norm = head.norm();
            if !(norm > 0.0) {
                return Err(NumericsError::ChainFailure { reason: "zero eigenvector in chain" });
            }
            let unit = phase_factor(head) / norm;
            let mut weight = Complex64::new(1.0, 0.0);
            for (k, p) in chain.iter().enumerate() {
                basis.set_column(col + k, &(p * (unit * weight)));
                factor[(col + k, col + k)] = c.mean;
                if k > 0 {
                    factor[(col + k - 1, col + k)] = Complex64::new(eps, 0.0);
                }
                weight *= eps;
            }
            blocks.push(JordanBlock { eigenvalue: c.mean, size: chain.len() });
            col += chain.len();
        }
    }
    if col != n {
        return Err(NumericsError::ChainFailure { reason: "chains do not span the space" });
    }
    check_reconstruction(&spec, &basis, &factor).map_err(|e| match e {
        NumericsError::Singular { .. } => NumericsError::ChainFailure { reason: "Jordan basis is singular" },
        other => other,
    })?;
    let rho = spec.clusters.iter().map(|c| c.mean.norm()).fold(0.0, f64::max);
    Ok(ModalForm {
        kind: ModalKind::Jordan,
        factor_norm: spectral_norm(&factor),
        basis,
        factor,
        spectral_radius: rho,
        epsilon: eps,
        blocks,
    })
}

/// `ε = (1 − ρ(A))/2`, which keeps `‖J_ε‖ ≤ ρ + ε < 1`.
pub fn choose_epsilon(a: &RealMatrix) -> Result<f64, NumericsError> {
    epsilon_for_radius(spectral_radius(a))
}

pub fn epsilon_for_radius(rho: f64) -> Result<f64, NumericsError> {
    if !(rho < 1.0) {
        return Err(NumericsError::NotSchurStable { spectral_radius: rho });
    }
    Ok((1.0 - rho) / 2.0)
}

/// Candidate grid `(1 − ρ)·2^{−k}`, `k = 1..=10`.
pub fn epsilon_grid(rho: f64) -> Vec<f64> {
    (1..=10).map(|k| (1.0 - rho) * libm::pow(2.0, -(k as f64))).collect()
}

/// Decomposes with eigenvectors when possible, otherwise with an ε-scaled
/// Jordan form using `eps` (or [`choose_epsilon`] when `None`).
pub fn modal_form(a: &RealMatrix, eps: Option<f64>, tol: &EigenTolerance) -> Result<ModalForm, NumericsError> {
    match eigendecompose(a, tol) {
        Err(NumericsError::Defective { .. }) => {
            let eps = match eps {
                Some(e) => e,
                None => choose_epsilon(a)?,
            };
            jordan_decompose(a, eps, tol)
        }
        other => other,
    }
}

/// `true` when `m` is diagonal up to `tol`.
#[cfg(test)]
fn is_diagonal(m: &ComplexMatrix, tol: f64) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)].norm() <= tol))
}
