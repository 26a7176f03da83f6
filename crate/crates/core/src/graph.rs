//! Weighted magnetic graphs: the triple (V, b, μ) with a phase function θ and
//! an optional potential W.
//!
//! Edges are stored once per unordered pair in a canonical orientation
//! (smaller [`VertexId`] first); the reverse direction of θ is obtained by
//! negation, so antisymmetry holds by construction. Vertices get dense indices
//! in insertion order for matrix assembly; layered families keep their
//! (row, index) labels.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{wrap_angle, Scalar};

/// Vertex identifier. Layered families use `Grid { row, index }` (both
/// 1-based); free-form graphs use `Named`. Grid ids order by (row, index),
/// which keeps neighbor listings deterministic and row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum VertexId {
    Grid { row: u32, index: u32 },
    Named(String),
}

impl VertexId {
    pub fn grid(row: u32, index: u32) -> Self {
        VertexId::Grid { row, index }
    }

    pub fn named(s: impl Into<String>) -> Self {
        VertexId::Named(s.into())
    }

    /// (row, index) for grid vertices, `None` otherwise.
    pub fn grid_pos(&self) -> Option<(u32, u32)> {
        match self {
            VertexId::Grid { row, index } => Some((*row, *index)),
            VertexId::Named(_) => None,
        }
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (VertexId::Grid { row: r1, index: i1 }, VertexId::Grid { row: r2, index: i2 }) => {
                (r1, i1).cmp(&(r2, i2))
            }
            (VertexId::Grid { .. }, VertexId::Named(_)) => Ordering::Less,
            (VertexId::Named(_), VertexId::Grid { .. }) => Ordering::Greater,
            (VertexId::Named(a), VertexId::Named(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Grid { row, index } => write!(f, "x{row},{index}"),
            VertexId::Named(s) => f.write_str(s),
        }
    }
}

impl FromStr for VertexId {
    type Err = std::convert::Infallible;

    /// `x<row>,<index>` parses as a grid id; anything else is a name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix('x') {
            if let Some((r, i)) = rest.split_once(',') {
                if let (Ok(row), Ok(index)) = (r.parse::<u32>(), i.parse::<u32>()) {
                    if row >= 1 && index >= 1 && !r.starts_with('+') && !i.starts_with('+') {
                        return Ok(VertexId::Grid { row, index });
                    }
                }
            }
        }
        Ok(VertexId::Named(s.to_string()))
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().expect("infallible"))
    }
}

/// One stored (unordered) edge, endpoints as dense indices with
/// `label(u) < label(v)`.
#[derive(Clone, Copy, Debug)]
pub struct Edge<T> {
    pub u: usize,
    pub v: usize,
    pub b: T,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex not found: {0}")]
    VertexNotFound(VertexId),
    #[error("duplicate vertex id: {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0} ~ {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("edge endpoint not declared as a vertex: {0}")]
    UnknownEndpoint(VertexId),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vertex {0} has degree zero")]
    DegreeZero(VertexId),
}

/// Locally finite weighted graph (finite storage): vertex measure μ > 0 and
/// symmetric edge weights b > 0. Value-level violations are reported by
/// [`validate`], not rejected at construction, so that defective inputs can be
/// diagnosed.
#[derive(Clone, Debug)]
pub struct WeightedGraph<T> {
    labels: Vec<VertexId>,
    mu: Vec<T>,
    index: HashMap<VertexId, usize>,
    edges: Vec<Edge<T>>,
    /// Per vertex: (neighbor index, edge index), sorted by neighbor label.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &VertexId {
        &self.labels[i]
    }

    pub fn mu(&self, i: usize) -> T {
        self.mu[i]
    }

    pub fn mu_values(&self) -> &[T] {
        &self.mu
    }

    pub fn idx(&self, id: &VertexId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn require_idx(&self, id: &VertexId) -> Result<usize, GraphError> {
        self.idx(id).ok_or_else(|| GraphError::VertexNotFound(id.clone()))
    }

    /// (neighbor, edge id) pairs of vertex `i`, ascending by neighbor label.
    pub fn adjacency(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    /// Number of neighbors, deg(x) = #{y : b(x,y) > 0}.
    pub fn vertex_degree(&self, x: &VertexId) -> Result<usize, GraphError> {
        Ok(self.adjacency[self.require_idx(x)?].len())
    }

    /// Weighted degree Deg(x) = (1/μ(x)) Σ_y b(x,y).
    pub fn weighted_degree(&self, x: &VertexId) -> Result<T, GraphError> {
        Ok(self.weighted_degree_idx(self.require_idx(x)?))
    }

    pub fn weighted_degree_idx(&self, i: usize) -> T {
        let sum: T = self.adjacency[i].iter().map(|&(_, e)| self.edges[e].b).sum();
        sum / self.mu[i]
    }

    /// Neighbors of `x` with edge weights, ascending by neighbor id.
    pub fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, T)>, GraphError> {
        let i = self.require_idx(x)?;
        Ok(self.adjacency[i]
            .iter()
            .map(|&(j, e)| (self.labels[j].clone(), self.edges[e].b))
            .collect())
    }

    /// Edge index of the unordered pair {x, y}, if present.
    pub fn edge_between(&self, x: usize, y: usize) -> Option<usize> {
        self.adjacency[x]
            .iter()
            .find(|&&(j, _)| j == y)
            .map(|&(_, e)| e)
    }

    /// Breadth-first connectivity over the whole vertex set.
    pub fn is_connected(&self) -> bool {
        if self.labels.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.labels.len()];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for &(j, _) in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == self.labels.len()
    }
}

/// Antisymmetric phase function θ on directed edges, values in (−π, π].
/// One value is stored per canonical edge; the reverse direction negates.
#[derive(Clone, Debug)]
pub struct PhaseAssignment<T> {
    per_edge: Vec<T>,
}

impl<T: Scalar> PhaseAssignment<T> {
    /// All phases zero (no magnetic field).
    pub fn zero(graph: &WeightedGraph<T>) -> Self {
        PhaseAssignment {
            per_edge: vec![T::zero(); graph.edge_count()],
        }
    }

    /// Phases aligned with `graph.edges()`, one value per canonical edge.
    /// Values are reduced into (−π, π].
    pub fn from_canonical(graph: &WeightedGraph<T>, values: Vec<T>) -> Result<Self, GraphError> {
        if values.len() != graph.edge_count() {
            return Err(GraphError::DimensionMismatch {
                expected: graph.edge_count(),
                got: values.len(),
            });
        }
        Ok(PhaseAssignment {
            per_edge: values.into_iter().map(wrap_angle).collect(),
        })
    }

    /// Raw phase of canonical edge `e` (direction `edges[e].u -> edges[e].v`).
    pub fn canonical(&self, e: usize) -> T {
        self.per_edge[e]
    }

    pub fn values(&self) -> &[T] {
        &self.per_edge
    }

    /// θ(x, y) with the antisymmetry convention; −π normalizes to π.
    pub fn theta(&self, graph: &WeightedGraph<T>, x: &VertexId, y: &VertexId) -> Result<T, GraphError> {
        let i = graph.require_idx(x)?;
        let j = graph.require_idx(y)?;
        let e = graph
            .edge_between(i, j)
            .ok_or_else(|| GraphError::VertexNotFound(y.clone()))?;
        Ok(self.theta_idx(graph, e, i))
    }

    /// θ along edge `e` leaving vertex `from` (an endpoint of `e`).
    pub fn theta_idx(&self, graph: &WeightedGraph<T>, e: usize, from: usize) -> T {
        if graph.edges()[e].u == from {
            self.per_edge[e]
        } else {
            wrap_angle(-self.per_edge[e])
        }
    }
}

/// Real potential W: V → ℝ (also used for the Golenia minorant q: V → [1, ∞)).
#[derive(Clone, Debug)]
pub struct PotentialAssignment<T> {
    values: Vec<T>,
}

impl<T: Scalar> PotentialAssignment<T> {
    pub fn zero(graph: &WeightedGraph<T>) -> Self {
        PotentialAssignment {
            values: vec![T::zero(); graph.vertex_count()],
        }
    }

    pub fn from_values(graph: &WeightedGraph<T>, values: Vec<T>) -> Result<Self, GraphError> {
        if values.len() != graph.vertex_count() {
            return Err(GraphError::DimensionMismatch {
                expected: graph.vertex_count(),
                got: values.len(),
            });
        }
        Ok(PotentialAssignment { values })
    }

    pub fn from_fn(graph: &WeightedGraph<T>, mut f: impl FnMut(&VertexId) -> T) -> Self {
        PotentialAssignment {
            values: graph.labels().iter().map(|id| f(id)).collect(),
        }
    }

    pub fn get(&self, i: usize) -> T {
        self.values[i]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// Graph plus phase plus potential; the full data of H = Δ_{b,μ;θ} + W.
/// Generated truncations also carry their frontier (vertices adjacent to
/// removed vertices) and row count.
#[derive(Clone, Debug)]
pub struct GraphBundle<T> {
    pub graph: WeightedGraph<T>,
    pub theta: PhaseAssignment<T>,
    pub potential: PotentialAssignment<T>,
    pub frontier: Vec<usize>,
    pub truncation_rows: Option<u32>,
}

impl<T: Scalar> GraphBundle<T> {
    pub fn new(graph: WeightedGraph<T>, theta: PhaseAssignment<T>, potential: PotentialAssignment<T>) -> Self {
        GraphBundle {
            graph,
            theta,
            potential,
            frontier: Vec::new(),
            truncation_rows: None,
        }
    }

    pub fn flux_free(graph: WeightedGraph<T>) -> Self {
        let theta = PhaseAssignment::zero(&graph);
        let potential = PotentialAssignment::zero(&graph);
        GraphBundle::new(graph, theta, potential)
    }

    pub fn frontier_labels(&self) -> Vec<VertexId> {
        self.frontier.iter().map(|&i| self.graph.label(i).clone()).collect()
    }
}

/// Builder for [`WeightedGraph`] and its aligned phase / length attributes.
/// Structural defects (duplicates, unknown endpoints) fail at `build`; value
/// defects (b ≤ 0, μ ≤ 0, self-loops) survive so [`validate`] can report them.
#[derive(Default)]
pub struct GraphBuilder<T> {
    vertices: Vec<(VertexId, T)>,
    edges: Vec<(VertexId, VertexId, T, T, Option<T>)>,
}

/// Output of [`GraphBuilder::build`]: the graph plus edge attributes aligned
/// with its canonical edge order.
pub struct BuiltGraph<T> {
    pub graph: WeightedGraph<T>,
    pub theta: PhaseAssignment<T>,
    /// Per-edge explicit length overrides, if any were supplied.
    pub sigma_override: Vec<Option<T>>,
}

impl<T: Scalar> GraphBuilder<T> {
    pub fn new() -> Self {
        GraphBuilder {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn vertex(&mut self, id: VertexId, mu: T) -> &mut Self {
        self.vertices.push((id, mu));
        self
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId, b: T) -> &mut Self {
        self.edge_full(u, v, b, T::zero(), None)
    }

    pub fn edge_with_theta(&mut self, u: VertexId, v: VertexId, b: T, theta: T) -> &mut Self {
        self.edge_full(u, v, b, theta, None)
    }

    /// θ is interpreted in the direction u → v and reduced into (−π, π].
    pub fn edge_full(&mut self, u: VertexId, v: VertexId, b: T, theta: T, sigma: Option<T>) -> &mut Self {
        self.edges.push((u, v, b, theta, sigma));
        self
    }

    pub fn build(self) -> Result<BuiltGraph<T>, GraphError> {
        if self.vertices.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(self.vertices.len());
        let mut labels = Vec::with_capacity(self.vertices.len());
        let mut mu = Vec::with_capacity(self.vertices.len());
        for (id, m) in self.vertices {
            if index.insert(id.clone(), labels.len()).is_some() {
                return Err(GraphError::DuplicateVertex(id));
            }
            labels.push(id);
            mu.push(m);
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        let mut theta = Vec::with_capacity(self.edges.len());
        let mut sigma = Vec::with_capacity(self.edges.len());
        let mut seen = HashMap::new();
        for (u_id, v_id, b, th, sg) in self.edges {
            let u = *index
                .get(&u_id)
                .ok_or_else(|| GraphError::UnknownEndpoint(u_id.clone()))?;
            let v = *index
                .get(&v_id)
                .ok_or_else(|| GraphError::UnknownEndpoint(v_id.clone()))?;
            // Canonical orientation: smaller label first; θ flips sign on swap.
            let (u, v, th) = if labels[v] < labels[u] {
                (v, u, -th)
            } else {
                (u, v, th)
            };
            if u != v && seen.insert((u, v), edges.len()).is_some() {
                return Err(GraphError::DuplicateEdge(labels[u].clone(), labels[v].clone()));
            }
            edges.push(Edge { u, v, b });
            theta.push(wrap_angle(th));
            sigma.push(sg);
        }

        let mut adjacency = vec![Vec::new(); labels.len()];
        for (e, edge) in edges.iter().enumerate() {
            if edge.u == edge.v {
                continue; // self-loop: kept in storage for validate, not adjacency
            }
            adjacency[edge.u].push((edge.v, e));
            adjacency[edge.v].push((edge.u, e));
        }
        for list in &mut adjacency {
            list.sort_by(|&(a, _), &(b, _)| labels[a].cmp(&labels[b]));
        }

        let graph = WeightedGraph {
            labels,
            mu,
            index,
            edges,
            adjacency,
        };
        let theta = PhaseAssignment { per_edge: theta };
        Ok(BuiltGraph {
            graph,
            theta,
            sigma_override: sigma,
        })
    }
}

/// One structural axiom violation found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    #[serde(rename = "non-positive measure")]
    NonPositiveMeasure,
    #[serde(rename = "non-positive edge weight")]
    NonPositiveEdgeWeight,
    #[serde(rename = "self-loop")]
    SelfLoop,
    #[serde(rename = "theta out of range")]
    ThetaOutOfRange,
    #[serde(rename = "disconnected")]
    Disconnected,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::NonPositiveMeasure => "non-positive measure",
            ViolationKind::NonPositiveEdgeWeight => "non-positive edge weight",
            ViolationKind::SelfLoop => "self-loop",
            ViolationKind::ThetaOutOfRange => "theta out of range",
            ViolationKind::Disconnected => "disconnected",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

/// Validation never aborts; an empty violation list means the bundle is valid.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub connected: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the structural axioms: μ > 0, b > 0, no self-loops, θ in range,
/// connectivity.
pub fn validate<T: Scalar>(bundle: &GraphBundle<T>) -> ValidationReport {
    let g = &bundle.graph;
    let mut violations = Vec::new();
    for (i, &m) in g.mu_values().iter().enumerate() {
        if !(m > T::zero()) || !m.is_finite() {
            violations.push(Violation {
                kind: ViolationKind::NonPositiveMeasure,
                detail: format!("mu({}) = {}", g.label(i), m),
            });
        }
    }
    for (e, edge) in g.edges().iter().enumerate() {
        if !(edge.b > T::zero()) || !edge.b.is_finite() {
            violations.push(Violation {
                kind: ViolationKind::NonPositiveEdgeWeight,
                detail: format!("b({}, {}) = {}", g.label(edge.u), g.label(edge.v), edge.b),
            });
        }
        if edge.u == edge.v {
            violations.push(Violation {
                kind: ViolationKind::SelfLoop,
                detail: format!("edge at {}", g.label(edge.u)),
            });
        }
        let th = bundle.theta.canonical(e);
        if !(th > -T::pi() && th <= T::pi()) {
            violations.push(Violation {
                kind: ViolationKind::ThetaOutOfRange,
                detail: format!("theta({}, {}) = {}", g.label(edge.u), g.label(edge.v), th),
            });
        }
    }
    let connected = g.is_connected();
    if !connected {
        violations.push(Violation {
            kind: ViolationKind::Disconnected,
            detail: "graph has more than one component".to_string(),
        });
    }
    ValidationReport {
        violations,
        connected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex(b: f64, mu0: f64, mu1: f64) -> BuiltGraph<f64> {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("v0"), mu0)
            .vertex(VertexId::named("v1"), mu1)
            .edge(VertexId::named("v0"), VertexId::named("v1"), b);
        builder.build().unwrap()
    }

    #[test]
    fn minimal_valid_graph() {
        let built = two_vertex(1.0, 1.0, 1.0);
        let bundle = GraphBundle::flux_free(built.graph);
        let report = validate(&bundle);
        assert!(report.is_valid());
        assert!(report.connected);
    }

    #[test]
    fn zero_weight_reported() {
        let built = two_vertex(0.0, 1.0, 1.0);
        let bundle = GraphBundle::flux_free(built.graph);
        let report = validate(&bundle);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::NonPositiveEdgeWeight));
    }

    #[test]
    fn negative_mu_reported() {
        let built = two_vertex(1.0, -1.0, 1.0);
        let bundle = GraphBundle::flux_free(built.graph);
        let report = validate(&bundle);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::NonPositiveMeasure));
    }

    #[test]
    fn self_loop_reported() {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("a"), 1.0)
            .edge(VertexId::named("a"), VertexId::named("a"), 1.0);
        let built = builder.build().unwrap();
        let bundle = GraphBundle::flux_free(built.graph);
        let report = validate(&bundle);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::SelfLoop));
    }

    #[test]
    fn disconnected_reported() {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("a"), 1.0)
            .vertex(VertexId::named("b"), 1.0);
        let built = builder.build().unwrap();
        let bundle = GraphBundle::flux_free(built.graph);
        let report = validate(&bundle);
        assert!(!report.connected);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Disconnected));
    }

    #[test]
    fn degree_and_weighted_degree() {
        let built = two_vertex(3.0, 1.5, 2.0);
        let g = built.graph;
        assert_eq!(g.vertex_degree(&VertexId::named("v0")).unwrap(), 1);
        assert_eq!(g.vertex_degree(&VertexId::named("v1")).unwrap(), 1);
        let deg = g.weighted_degree(&VertexId::named("v0")).unwrap();
        assert!((deg - 2.0).abs() < 1e-15, "3/1.5 = 2, got {deg}");
        assert!(g.weighted_degree(&VertexId::named("zz")).is_err());
        assert!(g.vertex_degree(&VertexId::named("zz")).is_err());
    }

    #[test]
    fn neighbors_sorted_and_weighted() {
        let built = two_vertex(1.0, 1.0, 1.0);
        let nbrs = built.graph.neighbors(&VertexId::named("v0")).unwrap();
        assert_eq!(nbrs, vec![(VertexId::named("v1"), 1.0)]);
    }

    #[test]
    fn theta_antisymmetric_accessor() {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("a"), 1.0)
            .vertex(VertexId::named("b"), 1.0)
            .edge_with_theta(VertexId::named("b"), VertexId::named("a"), 1.0, 0.7);
        let built = builder.build().unwrap();
        let g = &built.graph;
        let t_ab = built.theta.theta(g, &VertexId::named("a"), &VertexId::named("b")).unwrap();
        let t_ba = built.theta.theta(g, &VertexId::named("b"), &VertexId::named("a")).unwrap();
        assert!((t_ab + t_ba).abs() < 1e-15);
        assert!((t_ba - 0.7).abs() < 1e-15, "builder direction preserved");
    }

    #[test]
    fn pi_phase_survives_reversal_mod_two_pi() {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("a"), 1.0)
            .vertex(VertexId::named("b"), 1.0)
            .edge_with_theta(VertexId::named("a"), VertexId::named("b"), 1.0, std::f64::consts::PI);
        let built = builder.build().unwrap();
        let g = &built.graph;
        let t_ab = built.theta.theta(g, &VertexId::named("a"), &VertexId::named("b")).unwrap();
        let t_ba = built.theta.theta(g, &VertexId::named("b"), &VertexId::named("a")).unwrap();
        // −π is identified with π: both directions report π, equal mod 2π.
        assert!((t_ab - std::f64::consts::PI).abs() < 1e-15);
        assert!((t_ba - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn grid_ids_order_row_major() {
        let a = VertexId::grid(9, 1);
        let b = VertexId::grid(10, 1);
        assert!(a < b);
        assert!(VertexId::grid(2, 1) < VertexId::grid(2, 2));
        assert!(VertexId::grid(1, 1) < VertexId::named("a"));
    }

    #[test]
    fn vertex_id_display_roundtrip() {
        for id in [VertexId::grid(12, 3), VertexId::named("v0"), VertexId::named("x,y")] {
            let s = id.to_string();
            let back: VertexId = s.parse().unwrap();
            assert_eq!(back, id, "roundtrip of {s}");
        }
    }

    #[test]
    fn duplicate_edge_rejected() {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("a"), 1.0)
            .vertex(VertexId::named("b"), 1.0)
            .edge(VertexId::named("a"), VertexId::named("b"), 1.0)
            .edge(VertexId::named("b"), VertexId::named("a"), 2.0);
        assert!(matches!(builder.build(), Err(GraphError::DuplicateEdge(_, _))));
    }

    #[test]
    fn degree_sum_is_twice_edges() {
        let mut builder = GraphBuilder::<f64>::new();
        for i in 0..5 {
            builder.vertex(VertexId::named(format!("v{i}")), 1.0);
        }
        builder
            .edge(VertexId::named("v0"), VertexId::named("v1"), 1.0)
            .edge(VertexId::named("v1"), VertexId::named("v2"), 1.0)
            .edge(VertexId::named("v2"), VertexId::named("v3"), 1.0)
            .edge(VertexId::named("v3"), VertexId::named("v4"), 1.0)
            .edge(VertexId::named("v4"), VertexId::named("v0"), 1.0)
            .edge(VertexId::named("v0"), VertexId::named("v2"), 1.0);
        let built = builder.build().unwrap();
        let g = built.graph;
        let total: usize = (0..g.vertex_count()).map(|i| g.adjacency(i).len()).sum();
        assert_eq!(total, 2 * g.edge_count());
    }
}
