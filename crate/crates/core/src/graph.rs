//! Admissible-transition digraphs and the doubly weighted switching graph.
//!
//! Nodes are subsystem indices, zero-based. An edge `i → j` carries the gain
//! `ln‖basis_j⁻¹ · basis_i‖` and the loss `−ln ‖factor_i‖`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::numerics::{invert, spectral_norm, ComplexMatrix, ModalForm, NumericsError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({from}, {to}) is a self-loop")]
    SelfLoop { from: usize, to: usize },
    #[error("edge ({from}, {to}) references a node outside 0..{m}")]
    NodeOutOfRange { from: usize, to: usize, m: usize },
    #[error("a graph needs at least {min} node(s), got {m}")]
    TooFewNodes { m: usize, min: usize },
    #[error("expected {expected} modal forms of dimension {dim}, found {found} (dimension {found_dim})")]
    DimensionMismatch { expected: usize, dim: usize, found: usize, found_dim: usize },
    #[error("subsystem {index} has factor norm {factor_norm} >= 1")]
    MixedFormsInvalid { index: usize, factor_norm: f64 },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Admissible transitions between `m` subsystems; no self-loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Adjacency {
    m: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Adjacency {
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if m == 0 {
            return Err(GraphError::TooFewNodes { m, min: 1 });
        }
        let mut set = BTreeSet::new();
        for (from, to) in edges {
            if from >= m || to >= m {
                return Err(GraphError::NodeOutOfRange { from, to, m });
            }
            if from == to {
                return Err(GraphError::SelfLoop { from, to });
            }
            set.insert((from, to));
        }
        Ok(Self { m, edges: set })
    }

    /// Every ordered pair `(i, j)` with `i ≠ j`.
    pub fn fully_connected(m: usize) -> Result<Self, GraphError> {
        Self::new(m, (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))))
    }

    /// `k → k+1 (mod m)`, plus the reverse edges when `two_sided`.
    pub fn ring(m: usize, two_sided: bool) -> Result<Self, GraphError> {
        if m < 2 {
            return Err(GraphError::TooFewNodes { m, min: 2 });
        }
        let forward = (0..m).map(move |k| (k, (k + 1) % m));
        let backward = (0..m).filter(move |_| two_sided).map(move |k| ((k + 1) % m, k));
        Self::new(m, forward.chain(backward))
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted by `(from, to)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((node, 0)..(node + 1, 0)).map(|&(_, to)| to)
    }
}

/// Edge of the switching graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedEdge {
    pub from: usize,
    pub to: usize,
    /// ω⁺, the logarithmic gain of the basis change.
    pub gain: f64,
    /// ω⁻, the logarithmic contraction per step in `from`.
    pub loss: f64,
}

/// Doubly weighted digraph `{V, E, ω⁺, ω⁻}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SwitchingGraph {
    m: usize,
    edges: Vec<WeightedEdge>,
}

impl SwitchingGraph {
    /// Assembles a graph from explicit weights. Edges are sorted by `(from, to)`.
    pub fn from_edges(m: usize, mut edges: Vec<WeightedEdge>) -> Result<Self, GraphError> {
        for e in &edges {
            if e.from >= m || e.to >= m {
                return Err(GraphError::NodeOutOfRange { from: e.from, to: e.to, m });
            }
            if e.from == e.to {
                return Err(GraphError::SelfLoop { from: e.from, to: e.to });
            }
        }
        edges.sort_by_key(|e| (e.from, e.to));
        Ok(Self { m, edges })
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    pub fn edge(&self, from: usize, to: usize) -> Option<&WeightedEdge> {
        self.edges
            .binary_search_by_key(&(from, to), |e| (e.from, e.to))
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Edges with negative gain. Unusual for unit-norm bases, so reported as a diagnostic.
    pub fn negative_gain_edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().filter(|e| e.gain < 0.0).map(|e| (e.from, e.to)).collect()
    }

    /// Copy with every gain replaced by `f(edge)`.
    pub fn map_gains(&self, f: impl Fn(&WeightedEdge) -> f64) -> Self {
        let edges = self.edges.iter().map(|e| WeightedEdge { gain: f(e), ..*e }).collect();
        Self { m: self.m, edges }
    }

    /// Copy with every loss replaced by `f(edge)`.
    pub fn map_losses(&self, f: impl Fn(&WeightedEdge) -> f64) -> Self {
        let edges = self.edges.iter().map(|e| WeightedEdge { loss: f(e), ..*e }).collect();
        Self { m: self.m, edges }
    }
}

fn check_forms(forms: &[ModalForm], m: usize) -> Result<(), GraphError> {
    let dim = forms.first().map_or(0, ModalForm::dim);
    if forms.len() != m {
        return Err(GraphError::DimensionMismatch { expected: m, dim, found: forms.len(), found_dim: dim });
    }
    if let Some(bad) = forms.iter().find(|f| f.dim() != dim) {
        return Err(GraphError::DimensionMismatch { expected: m, dim, found: forms.len(), found_dim: bad.dim() });
    }
    for (index, f) in forms.iter().enumerate() {
        if !(f.factor_norm < 1.0) {
            return Err(GraphError::MixedFormsInvalid { index, factor_norm: f.factor_norm });
        }
    }
    Ok(())
}

/// `−ln ‖factor‖`. A zero factor (nilpotent subsystem) would give an infinite
/// loss; it is capped at the smallest positive norm, which only weakens the certificate.
pub fn loss_weight(factor_norm: f64) -> f64 {
    -libm::log(factor_norm.max(f64::MIN_POSITIVE))
}

/// Builds the switching graph of `forms` over the admissible edges `adj`.
pub fn build_graph(forms: &[ModalForm], adj: &Adjacency) -> Result<SwitchingGraph, GraphError> {
    check_forms(forms, adj.node_count())?;
    let inverses = forms.iter().map(ModalForm::basis_inverse).collect::<Result<Vec<_>, _>>()?;
    let edges = adj
        .edges()
        .map(|(i, j)| {
            let product: ComplexMatrix = &inverses[j] * &forms[i].basis;
            WeightedEdge {
                from: i,
                to: j,
                gain: libm::log(spectral_norm(&product)),
                loss: loss_weight(forms[i].factor_norm),
            }
        })
        .collect();
    SwitchingGraph::from_edges(adj.node_count(), edges)
}

/// `γ = max_{i,j} ‖basis_i‖·‖basis_j⁻¹‖`, the transient constant of the solution bound.
pub fn transient_constant(forms: &[ModalForm]) -> Result<f64, GraphError> {
    let mut norms = Vec::with_capacity(forms.len());
    let mut inv_norms = Vec::with_capacity(forms.len());
    for f in forms {
        norms.push(spectral_norm(&f.basis));
        inv_norms.push(spectral_norm(&invert(&f.basis)?));
    }
    let a = norms.iter().copied().fold(0.0, f64::max);
    let b = inv_norms.iter().copied().fold(0.0, f64::max);
    Ok(a * b)
}
