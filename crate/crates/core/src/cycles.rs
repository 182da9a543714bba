//! Maximum cycle ratio and maximum cycle mean of a switching graph.
//!
//! Both optimizers work per strongly connected component. The ratio uses
//! bisection on `λ` with a positive-cycle test (`ω⁺ − λω⁻ > 0` on some
//! cycle iff `λ < ν`), followed by ratio-improvement steps that land exactly
//! on an optimal cycle. The mean uses Karp's dynamic program.

use alloc::vec;
use alloc::vec::Vec;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::graph::{SwitchingGraph, WeightedEdge};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CycleError {
    #[error("edge ({from}, {to}) has non-positive loss {loss}")]
    NonPositiveLoss { from: usize, to: usize, loss: f64 },
    #[error("graph has {m} nodes, enumeration is limited to {max}")]
    TooLarge { m: usize, max: usize },
}

/// Default node limit for [`enumerate_cycles`].
pub const ENUMERATION_LIMIT: usize = 10;

/// Simple cycle `p₁ → … → p_s → p₁`, rotated so the smallest node leads.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    nodes: Vec<usize>,
}

impl Cycle {
    /// Canonicalizes the rotation. Panics on an empty node list.
    pub fn new(mut nodes: Vec<usize>) -> Self {
        assert!(!nodes.is_empty(), "a cycle needs at least one node");
        let lead = nodes
            .iter()
            .enumerate()
            .min_by_key(|&(_, n)| *n)
            .map(|(i, _)| i)
            .unwrap_or(0);
        nodes.rotate_left(lead);
        Self { nodes }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Edges including the closing one.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let s = self.nodes.len();
        (0..s).map(move |k| (self.nodes[k], self.nodes[(k + 1) % s]))
    }

    /// `(ω⁺(C), ω⁻(C))`, or `None` when an edge is missing from `g`.
    pub fn weights(&self, g: &SwitchingGraph) -> Option<(f64, f64)> {
        let mut gain = 0.0;
        let mut loss = 0.0;
        for (i, j) in self.edges() {
            let e = g.edge(i, j)?;
            gain += e.gain;
            loss += e.loss;
        }
        Some((gain, loss))
    }

    pub fn ratio(&self, g: &SwitchingGraph) -> Option<f64> {
        self.weights(g).map(|(p, l)| p / l)
    }

    pub fn mean(&self, g: &SwitchingGraph) -> Option<f64> {
        self.weights(g).map(|(p, _)| p / self.len() as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleObjective {
    Ratio,
    Mean,
}

/// Optimal cycle and its objective value.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleCertificate {
    pub cycle: Cycle,
    pub value: f64,
    pub objective: CycleObjective,
}

impl CycleCertificate {
    fn of(cycle: Cycle, g: &SwitchingGraph, objective: CycleObjective) -> Self {
        let value = match objective {
            CycleObjective::Ratio => cycle.ratio(g),
            CycleObjective::Mean => cycle.mean(g),
        }
        .expect("cycle edges come from the graph");
        Self { cycle, value, objective }
    }

    /// Value recomputed from the raw edge weights of `g`.
    pub fn recompute(&self, g: &SwitchingGraph) -> Option<f64> {
        match self.objective {
            CycleObjective::Ratio => self.cycle.ratio(g),
            CycleObjective::Mean => self.cycle.mean(g),
        }
    }
}

/// Strongly connected component that can hold a cycle, with local indexing.
struct Component {
    nodes: Vec<usize>,
    edges: Vec<(usize, usize, WeightedEdge)>,
}

fn components(g: &SwitchingGraph) -> Vec<Component> {
    let mut pg: DiGraph<(), ()> = DiGraph::with_capacity(g.node_count(), g.edges().len());
    let idx: Vec<NodeIndex> = (0..g.node_count()).map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(idx[e.from], idx[e.to], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&pg)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            v.sort_unstable();
            v
        })
        .filter(|c| c.len() > 1)
        .collect();
    comps.sort();
    comps
        .into_iter()
        .map(|nodes| {
            let mut local = vec![usize::MAX; g.node_count()];
            for (k, &n) in nodes.iter().enumerate() {
                local[n] = k;
            }
            let edges = g
                .edges()
                .iter()
                .filter(|e| local[e.from] != usize::MAX && local[e.to] != usize::MAX)
                .map(|e| (local[e.from], local[e.to], *e))
                .collect();
            Component { nodes, edges }
        })
        .collect()
}

/// Searches for a cycle of positive weight `gain − λ·loss(edge)` inside `comp`
/// by longest-path Bellman-Ford from a virtual source.
fn positive_cycle_in(comp: &Component, lambda: f64, loss: &impl Fn(&WeightedEdge) -> f64) -> Option<Cycle> {
    let n = comp.nodes.len();
    let weight = |e: &WeightedEdge| e.gain - lambda * loss(e);
    let mut dist = vec![0.0f64; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut relaxed = false;
    for _ in 0..n {
        relaxed = false;
        for &(u, v, ref e) in &comp.edges {
            let cand = dist[u] + weight(e);
            if cand > dist[v] {
                dist[v] = cand;
                pred[v] = Some(u);
                relaxed = true;
            }
        }
        if !relaxed {
            return None;
        }
    }
    if !relaxed {
        return None;
    }
    // cycles of the predecessor graph have positive weight
    let mut stamp = vec![usize::MAX; n];
    for start in 0..n {
        let mut v = start;
        while stamp[v] == usize::MAX {
            stamp[v] = start;
            match pred[v] {
                Some(p) => v = p,
                None => break,
            }
        }
        if stamp[v] != start || pred[v].is_none() {
            continue;
        }
        // v lies on a cycle first closed during this walk
        let mut cyc = vec![comp.nodes[v]];
        let mut w = pred[v].unwrap();
        while w != v {
            cyc.push(comp.nodes[w]);
            w = pred[w].unwrap();
        }
        cyc.reverse();
        let cycle = Cycle::new(cyc);
        let total: f64 = cycle
            .edges()
            .map(|(a, b)| {
                let e = comp.edges.iter().find(|x| x.2.from == a && x.2.to == b).unwrap();
                weight(&e.2)
            })
            .sum();
        if total > 0.0 {
            return Some(cycle);
        }
    }
    None
}

/// A simple cycle with `ω⁺(C) − λ·ω⁻(C) > 0`, if any exists.
pub fn positive_cycle_exists(g: &SwitchingGraph, lambda: f64) -> Option<Cycle> {
    components(g)
        .iter()
        .find_map(|c| positive_cycle_in(c, lambda, &|e: &WeightedEdge| e.loss))
}

fn check_losses(g: &SwitchingGraph) -> Result<(), CycleError> {
    match g.edges().iter().find(|e| !(e.loss > 0.0)) {
        Some(e) => Err(CycleError::NonPositiveLoss { from: e.from, to: e.to, loss: e.loss }),
        None => Ok(()),
    }
}

/// Raises `current` through cycles of strictly larger objective until none remains.
fn improve(
    comp: &Component,
    g: &SwitchingGraph,
    mut current: CycleCertificate,
    loss: &impl Fn(&WeightedEdge) -> f64,
) -> CycleCertificate {
    for _ in 0..10_000 {
        let Some(next) = positive_cycle_in(comp, current.value, loss) else {
            break;
        };
        let cand = CycleCertificate::of(next, g, current.objective);
        if cand.value > current.value {
            current = cand;
        } else {
            break;
        }
    }
    current
}

fn ratio_in_component(comp: &Component, g: &SwitchingGraph, tol: f64) -> CycleCertificate {
    let loss = |e: &WeightedEdge| e.loss;
    let ratios = comp.edges.iter().map(|(_, _, e)| e.gain / e.loss);
    // a cycle ratio is a mediant of its edge ratios
    let lo_edge = ratios.clone().fold(f64::INFINITY, f64::min);
    let hi_edge = ratios.fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (lo_edge - 1.0, hi_edge + 1.0);
    let mut witness = positive_cycle_in(comp, lo, &loss).expect("every cycle beats the lower bracket");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match positive_cycle_in(comp, mid, &loss) {
            Some(c) => {
                witness = c;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    improve(comp, g, CycleCertificate::of(witness, g, CycleObjective::Ratio), &loss)
}

fn pick_best(cands: impl Iterator<Item = CycleCertificate>) -> Option<CycleCertificate> {
    cands.fold(None, |best: Option<CycleCertificate>, c| match best {
        Some(b) if b.value >= c.value => Some(b),
        _ => Some(c),
    })
}

/// Maximum of `ω⁺(C)/ω⁻(C)` over all cycles; `None` for an acyclic graph.
pub fn max_cycle_ratio(g: &SwitchingGraph, tol: f64) -> Result<Option<CycleCertificate>, CycleError> {
    check_losses(g)?;
    let tol = if tol > 0.0 { tol } else { 1e-9 };
    Ok(pick_best(components(g).iter().map(|c| ratio_in_component(c, g, tol))))
}

fn mean_in_component(comp: &Component, g: &SwitchingGraph) -> CycleCertificate {
    let n = comp.nodes.len();
    let neg = f64::NEG_INFINITY;
    // best[k][v]: heaviest walk with exactly k edges from local node 0 to v
    let mut best = vec![vec![neg; n]; n + 1];
    let mut pred = vec![vec![usize::MAX; n]; n + 1];
    best[0][0] = 0.0;
    for k in 1..=n {
        for &(u, v, ref e) in &comp.edges {
            if best[k - 1][u] > neg {
                let cand = best[k - 1][u] + e.gain;
                if cand > best[k][v] {
                    best[k][v] = cand;
                    pred[k][v] = u;
                }
            }
        }
    }
    let mut top: Option<(usize, f64)> = None;
    for v in 0..n {
        if best[n][v] == neg {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| best[k][v] > neg)
            .map(|k| (best[n][v] - best[k][v]) / (n - k) as f64)
            .fold(f64::INFINITY, f64::min);
        if top.map_or(true, |(_, t)| worst > t) {
            top = Some((v, worst));
        }
    }
    let (mut v, _) = top.expect("a strongly connected component has walks of every length");
    let mut walk = vec![v];
    for k in (1..=n).rev() {
        v = pred[k][v];
        walk.push(v);
    }
    walk.reverse();

    // split the walk into simple cycles and keep the best one
    let mut found: Vec<Cycle> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &node in &walk {
        if let Some(pos) = stack.iter().position(|&s| s == node) {
            let cyc: Vec<usize> = stack[pos..].iter().map(|&l| comp.nodes[l]).collect();
            found.push(Cycle::new(cyc));
            stack.truncate(pos);
        }
        stack.push(node);
    }
    let seed = pick_best(found.into_iter().map(|c| CycleCertificate::of(c, g, CycleObjective::Mean)))
        .expect("a walk of n edges repeats a node");
    improve(comp, g, seed, &|_: &WeightedEdge| 1.0)
}

/// Maximum of `ω⁺(C)/|C|` over all cycles; `None` for an acyclic graph.
pub fn max_cycle_mean(g: &SwitchingGraph) -> Option<CycleCertificate> {
    pick_best(components(g).iter().map(|c| mean_in_component(c, g)))
}

/// Every simple cycle exactly once, smallest node first, in lexicographic DFS order.
pub fn enumerate_cycles(g: &SwitchingGraph, max_nodes: usize) -> Result<Vec<Cycle>, CycleError> {
    let m = g.node_count();
    if m > max_nodes {
        return Err(CycleError::TooLarge { m, max: max_nodes });
    }
    let mut succ = vec![Vec::new(); m];
    for e in g.edges() {
        succ[e.from].push(e.to);
    }
    for s in &mut succ {
        s.sort_unstable();
    }

    fn dfs(start: usize, node: usize, succ: &[Vec<usize>], path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Cycle>) {
        for &next in &succ[node] {
            if next == start {
                out.push(Cycle { nodes: path.clone() });
            } else if next > start && !on[next] {
                on[next] = true;
                path.push(next);
                dfs(start, next, succ, path, on, out);
                path.pop();
                on[next] = false;
            }
        }
    }

    let mut out = Vec::new();
    let mut on = vec![false; m];
    for start in 0..m {
        let mut path = vec![start];
        on[start] = true;
        dfs(start, start, &succ, &mut path, &mut on, &mut out);
        on[start] = false;
    }
    Ok(out)
}
