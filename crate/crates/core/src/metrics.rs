//! Edge-length assignments σ, the induced path metric d_σ, and the intrinsic /
//! strongly intrinsic checks.
//!
//! The default assignment is
//! σ₁(x,y) = b(x,y)^{−1/2} · min{μ(x)/deg(x), μ(y)/deg(y)}^{1/2},
//! which is strongly intrinsic on every locally finite graph. A minorant
//! q ≥ 1 rescales lengths to σ_q(x,y) = min{q(x)^{−1/2}, q(y)^{−1/2}}·σ(x,y).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::{GraphError, PotentialAssignment, VertexId, WeightedGraph};
use crate::scalar::Scalar;

/// Absolute slack over 1.0 accepted by the intrinsic checks; σ₁ attains
/// equality, which strict ≤ would reject under rounding.
pub const INTRINSIC_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertex {0} has degree zero")]
    DegreeZero(VertexId),
    #[error("q below one at vertex {0}: {1}")]
    QBelowOne(VertexId, f64),
    #[error("length vector has {got} entries, graph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
}

/// Positive edge lengths aligned with the graph's canonical edge order.
#[derive(Clone, Debug)]
pub struct EdgeLengthAssignment<T> {
    lengths: Vec<T>,
}

impl<T: Scalar> EdgeLengthAssignment<T> {
    pub fn from_values(graph: &WeightedGraph<T>, lengths: Vec<T>) -> Result<Self, MetricError> {
        if lengths.len() != graph.edge_count() {
            return Err(MetricError::LengthMismatch {
                expected: graph.edge_count(),
                got: lengths.len(),
            });
        }
        Ok(EdgeLengthAssignment { lengths })
    }

    pub fn len(&self, e: usize) -> T {
        self.lengths[e]
    }

    pub fn values(&self) -> &[T] {
        &self.lengths
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn scaled(&self, c: T) -> Self {
        EdgeLengthAssignment {
            lengths: self.lengths.iter().map(|&l| l * c).collect(),
        }
    }
}

/// σ₁ of the remark after the intrinsic-metric definition; strongly intrinsic
/// by construction. Errors on isolated vertices (deg = 0 makes μ/deg undefined).
pub fn sigma1_default<T: Scalar>(graph: &WeightedGraph<T>) -> Result<EdgeLengthAssignment<T>, MetricError> {
    let mut ratio = Vec::with_capacity(graph.vertex_count());
    for i in 0..graph.vertex_count() {
        let deg = graph.adjacency(i).len();
        if deg == 0 {
            return Err(MetricError::DegreeZero(graph.label(i).clone()));
        }
        ratio.push(graph.mu(i) / T::from_usize(deg).unwrap());
    }
    let lengths = graph
        .edges()
        .iter()
        .map(|e| (ratio[e.u].min(ratio[e.v])).sqrt() / e.b.sqrt())
        .collect();
    Ok(EdgeLengthAssignment { lengths })
}

/// σ_q(x,y) = min{q(x)^{−1/2}, q(y)^{−1/2}} · σ(x,y), for q ≥ 1.
pub fn sigma_q<T: Scalar>(
    graph: &WeightedGraph<T>,
    sigma: &EdgeLengthAssignment<T>,
    q: &PotentialAssignment<T>,
) -> Result<EdgeLengthAssignment<T>, MetricError> {
    for i in 0..graph.vertex_count() {
        let qi = q.get(i);
        if !(qi >= T::one()) {
            return Err(MetricError::QBelowOne(
                graph.label(i).clone(),
                qi.to_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    let lengths = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let factor = q.get(edge.u).max(q.get(edge.v)).sqrt().recip();
            sigma.len(e) * factor
        })
        .collect();
    Ok(EdgeLengthAssignment { lengths })
}

/// Outcome of an intrinsic check: the worst vertex ratio
/// (1/μ(x)) Σ_y b(x,y) len(x,y)² and whether it stays ≤ 1 (+ tolerance).
#[derive(Clone, Debug)]
pub struct IntrinsicCheckResult<T> {
    pub max_ratio: T,
    pub worst_vertex: VertexId,
    pub passes: bool,
}

fn weighted_square_ratio<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
) -> IntrinsicCheckResult<T> {
    let mut max_ratio = T::neg_infinity();
    let mut worst = 0usize;
    for i in 0..graph.vertex_count() {
        let mut sum = T::zero();
        for &(_, e) in graph.adjacency(i) {
            let l = len.len(e);
            sum += graph.edges()[e].b * l * l;
        }
        let ratio = sum / graph.mu(i);
        if ratio > max_ratio {
            max_ratio = ratio;
            worst = i;
        }
    }
    if !max_ratio.is_finite() && graph.vertex_count() == 0 {
        max_ratio = T::zero();
    }
    IntrinsicCheckResult {
        max_ratio,
        worst_vertex: graph.label(worst).clone(),
        passes: max_ratio <= T::one() + T::real(INTRINSIC_TOL),
    }
}

/// Definition of an intrinsic pseudo metric, evaluated on the supplied edge
/// lengths (a path metric restricted to edges satisfies d(x,y) ≤ len(x,y),
/// so passing here is the checked sufficient condition).
pub fn check_intrinsic<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
) -> IntrinsicCheckResult<T> {
    weighted_square_ratio(graph, len)
}

/// Strongly intrinsic check: the same weighted sum with σ itself on edges.
/// Criteria cite it separately from [`check_intrinsic`], hence the named alias.
pub fn check_strongly_intrinsic<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
) -> IntrinsicCheckResult<T> {
    weighted_square_ratio(graph, len)
}

struct HeapEntry<T> {
    dist: T,
    vertex: usize,
}

impl<T: PartialOrd> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: PartialOrd> Eq for HeapEntry<T> {}
impl<T: PartialOrd> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: PartialOrd> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance via reversed comparison; ties by vertex index
        // keep the traversal deterministic. Lengths are non-negative, so the
        // partial order is total on reachable entries.
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Single-source shortest-path distances under `len` (Dijkstra, binary heap).
/// Unreachable vertices get `T::infinity()`.
pub fn path_metric<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
    source: &VertexId,
) -> Result<Vec<T>, MetricError> {
    let s = graph.require_idx(source)?;
    Ok(path_metric_multi(graph, len, &[s]))
}

/// Dijkstra from a set of sources (distance to the nearest source).
pub fn path_metric_multi<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
    sources: &[usize],
) -> Vec<T> {
    let n = graph.vertex_count();
    let mut dist = vec![T::infinity(); n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        dist[s] = T::zero();
        heap.push(HeapEntry {
            dist: T::zero(),
            vertex: s,
        });
    }
    while let Some(HeapEntry { dist: d, vertex: i }) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        for &(j, e) in graph.adjacency(i) {
            let nd = d + len.len(e);
            if nd < dist[j] {
                dist[j] = nd;
                heap.push(HeapEntry { dist: nd, vertex: j });
            }
        }
    }
    dist
}

/// Least K such that |f(x) − f(y)| ≤ K·len(x,y) on every edge.
pub fn lipschitz_constant<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
    f: &[T],
) -> T {
    let mut k = T::zero();
    for (e, edge) in graph.edges().iter().enumerate() {
        let slope = (f[edge.u] - f[edge.v]).abs() / len.len(e);
        if slope > k {
            k = slope;
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, PotentialAssignment, VertexId};

    fn path3(len0: f64, len1: f64) -> (WeightedGraph<f64>, EdgeLengthAssignment<f64>) {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("v0"), 1.0)
            .vertex(VertexId::named("v1"), 1.0)
            .vertex(VertexId::named("v2"), 1.0)
            .edge(VertexId::named("v0"), VertexId::named("v1"), 1.0)
            .edge(VertexId::named("v1"), VertexId::named("v2"), 1.0);
        let built = b.build().unwrap();
        let len = EdgeLengthAssignment::from_values(&built.graph, vec![len0, len1]).unwrap();
        (built.graph, len)
    }

    #[test]
    fn sigma1_unit_two_vertex() {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("v0"), 1.0)
            .vertex(VertexId::named("v1"), 1.0)
            .edge(VertexId::named("v0"), VertexId::named("v1"), 1.0);
        let built = b.build().unwrap();
        let sigma = sigma1_default(&built.graph).unwrap();
        assert!((sigma.len(0) - 1.0).abs() < 1e-15);
        let check = check_strongly_intrinsic(&built.graph, &sigma);
        assert!(check.passes);
        assert!((check.max_ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn isolated_vertex_errors() {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("v0"), 1.0)
            .vertex(VertexId::named("v1"), 1.0)
            .vertex(VertexId::named("lonely"), 1.0)
            .edge(VertexId::named("v0"), VertexId::named("v1"), 1.0);
        let built = b.build().unwrap();
        assert!(matches!(
            sigma1_default(&built.graph),
            Err(MetricError::DegreeZero(_))
        ));
    }

    #[test]
    fn doubled_lengths_fail_with_ratio_four() {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("v0"), 1.0)
            .vertex(VertexId::named("v1"), 1.0)
            .edge(VertexId::named("v0"), VertexId::named("v1"), 1.0);
        let built = b.build().unwrap();
        let sigma = sigma1_default(&built.graph).unwrap();
        let doubled = sigma.scaled(2.0);
        let check = check_intrinsic(&built.graph, &doubled);
        assert!(!check.passes);
        assert!((check.max_ratio - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_q_identity_when_q_is_one() {
        let (g, len) = path3(0.5, 0.25);
        let q = PotentialAssignment::from_values(&g, vec![1.0; 3]).unwrap();
        let rescaled = sigma_q(&g, &len, &q).unwrap();
        for e in 0..g.edge_count() {
            assert_eq!(rescaled.len(e), len.len(e));
        }
    }

    #[test]
    fn sigma_q_rejects_small_q() {
        let (g, len) = path3(0.5, 0.25);
        let q = PotentialAssignment::from_values(&g, vec![1.0, 0.5, 1.0]).unwrap();
        assert!(matches!(sigma_q(&g, &len, &q), Err(MetricError::QBelowOne(_, _))));
    }

    #[test]
    fn chain_distance_sums() {
        let (g, len) = path3(0.5, 0.25);
        let d = path_metric(&g, &len, &VertexId::named("v0")).unwrap();
        assert_eq!(d[0], 0.0);
        assert!((d[1] - 0.5).abs() < 1e-15);
        assert!((d[2] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn unreachable_is_infinite() {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("v0"), 1.0)
            .vertex(VertexId::named("v1"), 1.0)
            .vertex(VertexId::named("w"), 1.0)
            .edge(VertexId::named("v0"), VertexId::named("v1"), 1.0);
        let built = b.build().unwrap();
        let len = EdgeLengthAssignment::from_values(&built.graph, vec![1.0]).unwrap();
        let d = path_metric(&built.graph, &len, &VertexId::named("v0")).unwrap();
        let w = built.graph.idx(&VertexId::named("w")).unwrap();
        assert!(d[w].is_infinite());
    }

    #[test]
    fn lipschitz_of_constant_is_zero() {
        let (g, len) = path3(0.5, 0.25);
        let f = vec![3.0; 3];
        assert_eq!(lipschitz_constant(&g, &len, &f), 0.0);
    }

    #[test]
    fn distance_function_is_one_lipschitz() {
        let (g, len) = path3(0.5, 0.25);
        let d = path_metric(&g, &len, &VertexId::named("v0")).unwrap();
        let k = lipschitz_constant(&g, &len, &d);
        assert!(k <= 1.0 + 1e-12, "distance must be 1-Lipschitz, got {k}");
    }

    #[test]
    fn works_in_f32() {
        let mut b = GraphBuilder::<f32>::new();
        b.vertex(VertexId::named("v0"), 1.0)
            .vertex(VertexId::named("v1"), 2.0)
            .edge(VertexId::named("v0"), VertexId::named("v1"), 0.5);
        let built = b.build().unwrap();
        let sigma = sigma1_default(&built.graph).unwrap();
        assert!(check_strongly_intrinsic(&built.graph, &sigma).passes);
    }
}
