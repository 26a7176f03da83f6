//! Good coverings by finite connected subgraphs, per-cell lowest eigenvalues
//! p_l of the b ≡ 1 magnetic Laplacian, and the effective potential
//! W_e(x) = (1/m) Σ_{cells ∋ x} p_l · inf b.
//!
//! For the triangular family the covering is built automatically: one 3-cycle
//! per horizontal edge (its unique triangle through the previous row's spine
//! vertex), phases 0 on tree edges and π on the horizontal, holonomy π per
//! cell, degree m = 2.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, PhaseAssignment, VertexId, WeightedGraph};
use crate::linalg::{hermitian_eigen, LinalgError};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum CoveringError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("covering is invalid: {0}")]
    Invalid(String),
    #[error("not a triangle-covered family: {0}")]
    NotTriangleFamily(String),
}

/// One covering cell: a connected subgraph given by vertex and edge indices
/// into the host graph.
#[derive(Clone, Debug)]
pub struct CoveringCell {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Family of cells with declared covering degree m.
#[derive(Clone, Debug)]
pub struct GoodCovering {
    pub cells: Vec<CoveringCell>,
    pub m: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringViolation {
    pub kind: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CoveringReport {
    pub violations: Vec<CoveringViolation>,
}

impl CoveringReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: &str, detail: String) {
        self.violations.push(CoveringViolation {
            kind: kind.to_string(),
            detail,
        });
    }
}

/// Checks the definition of a good covering of degree m: every vertex lies in
/// some cell, every edge is covered between 1 and m times, and each cell is a
/// connected subgraph of the host.
pub fn validate_covering<T: Scalar>(graph: &WeightedGraph<T>, cover: &GoodCovering) -> CoveringReport {
    let mut report = CoveringReport::default();
    if cover.m == 0 {
        report.push("degree", "covering degree m must be positive".into());
    }
    let mut vertex_covered = vec![false; graph.vertex_count()];
    let mut edge_multiplicity = vec![0u32; graph.edge_count()];
    for (l, cell) in cover.cells.iter().enumerate() {
        for &v in &cell.vertices {
            if v >= graph.vertex_count() {
                report.push("cell vertex", format!("cell {l}: vertex index {v} out of range"));
                continue;
            }
            vertex_covered[v] = true;
        }
        for &e in &cell.edges {
            if e >= graph.edge_count() {
                report.push("cell edge", format!("cell {l}: edge index {e} out of range"));
                continue;
            }
            edge_multiplicity[e] += 1;
            let edge = graph.edges()[e];
            if !cell.vertices.contains(&edge.u) || !cell.vertices.contains(&edge.v) {
                report.push(
                    "cell edge",
                    format!("cell {l}: edge {e} has an endpoint outside the cell"),
                );
            }
        }
        if !cell_connected(graph, cell) {
            report.push("cell disconnected", format!("cell {l} is not connected"));
        }
    }
    for (v, covered) in vertex_covered.iter().enumerate() {
        if !covered {
            report.push("vertex uncovered", format!("vertex {}", graph.label(v)));
        }
    }
    for (e, &mult) in edge_multiplicity.iter().enumerate() {
        let edge = graph.edges()[e];
        if mult == 0 {
            report.push(
                "edge uncovered",
                format!("edge {} ~ {}", graph.label(edge.u), graph.label(edge.v)),
            );
        } else if mult > cover.m {
            report.push(
                "multiplicity exceeded",
                format!(
                    "edge {} ~ {} covered {mult} times, m = {}",
                    graph.label(edge.u),
                    graph.label(edge.v),
                    cover.m
                ),
            );
        }
    }
    report
}

fn cell_connected<T: Scalar>(graph: &WeightedGraph<T>, cell: &CoveringCell) -> bool {
    if cell.vertices.is_empty() {
        return false;
    }
    let ok = cell
        .edges
        .iter()
        .all(|&e| e < graph.edge_count());
    if !ok {
        return false;
    }
    let mut adj: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
    for &v in &cell.vertices {
        adj.entry(v).or_default();
    }
    for &e in &cell.edges {
        let edge = graph.edges()[e];
        adj.entry(edge.u).or_default().push(edge.v);
        adj.entry(edge.v).or_default().push(edge.u);
    }
    let mut seen = std::collections::HashSet::new();
    let mut stack = vec![cell.vertices[0]];
    seen.insert(cell.vertices[0]);
    while let Some(v) = stack.pop() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    cell.vertices.iter().all(|v| seen.contains(v))
}

/// Lowest eigenvalue p_l of the cell Laplacian Δ^{(l)}_{1,μ;θ}: edge weights
/// forced to 1, μ and θ restricted to the cell.
pub fn cell_lowest_eigenvalue<T: Scalar>(
    graph: &WeightedGraph<T>,
    theta: &PhaseAssignment<T>,
    cell: &CoveringCell,
) -> Result<T, CoveringError> {
    let n = cell.vertices.len();
    if n == 0 {
        return Err(CoveringError::Invalid("empty cell".into()));
    }
    let local: std::collections::HashMap<usize, usize> = cell
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let zero = Complex::new(T::zero(), T::zero());
    let mut s = vec![zero; n * n];
    let mut wdeg = vec![T::zero(); n];
    for &e in &cell.edges {
        let edge = graph.edges()[e];
        let (Some(&i), Some(&j)) = (local.get(&edge.u), local.get(&edge.v)) else {
            return Err(CoveringError::Invalid(format!(
                "edge {e} endpoints outside cell"
            )));
        };
        let hop = Complex::from_polar(T::one(), theta.canonical(e));
        let scale = (graph.mu(edge.u) * graph.mu(edge.v)).sqrt();
        s[i * n + j] = s[i * n + j] - hop.unscale(scale);
        s[j * n + i] = s[j * n + i] - hop.conj().unscale(scale);
        wdeg[i] += T::one();
        wdeg[j] += T::one();
    }
    for (i, &v) in cell.vertices.iter().enumerate() {
        s[i * n + i] = Complex::new(wdeg[i] / graph.mu(v), T::zero());
    }
    let eig = hermitian_eigen(&s, n, false)?;
    Ok(eig.values[0])
}

/// W_e(x) = (1/m) Σ_{l : x ∈ V_l} p_l · inf_{{y,z} ∈ E_l} b(y,z), one entry per
/// host vertex.
pub fn effective_potential<T: Scalar>(
    graph: &WeightedGraph<T>,
    theta: &PhaseAssignment<T>,
    cover: &GoodCovering,
) -> Result<Vec<T>, CoveringError> {
    let report = validate_covering(graph, cover);
    if !report.is_valid() {
        return Err(CoveringError::Invalid(format!(
            "{} violations, first: {}",
            report.violations.len(),
            report.violations[0].detail
        )));
    }
    let mut w_e = vec![T::zero(); graph.vertex_count()];
    let m = T::from_u32(cover.m).unwrap();
    for cell in &cover.cells {
        let p = cell_lowest_eigenvalue(graph, theta, cell)?;
        let inf_b = cell
            .edges
            .iter()
            .map(|&e| graph.edges()[e].b)
            .fold(T::infinity(), |acc, b| acc.min(b));
        let contribution = p * inf_b / m;
        for &v in &cell.vertices {
            w_e[v] += contribution;
        }
    }
    Ok(w_e)
}

/// Builds the triangle covering of a triangular-family truncation: one cell
/// per horizontal edge, phases 0 on cross-row (spanning tree) edges and π on
/// horizontals. Errors if the graph does not have that shape.
pub fn triangle_covering<T: Scalar>(
    graph: &WeightedGraph<T>,
) -> Result<(GoodCovering, PhaseAssignment<T>), CoveringError> {
    let mut cells = Vec::new();
    let mut theta = vec![T::zero(); graph.edge_count()];
    let mut horizontal_count = 0usize;
    for (e, edge) in graph.edges().iter().enumerate() {
        let (Some((ru, iu)), Some((rv, iv))) = (
            graph.label(edge.u).grid_pos(),
            graph.label(edge.v).grid_pos(),
        ) else {
            return Err(CoveringError::NotTriangleFamily(
                "graph has non-grid vertex labels".into(),
            ));
        };
        if ru == rv {
            // horizontal: must join consecutive indices and close a unique
            // triangle through the previous row's spine vertex
            if iv != iu + 1 {
                return Err(CoveringError::NotTriangleFamily(format!(
                    "row-{ru} edge joins non-consecutive indices {iu},{iv}"
                )));
            }
            horizontal_count += 1;
            theta[e] = T::pi();
            let apex = graph
                .idx(&VertexId::grid(ru - 1, 1))
                .ok_or_else(|| CoveringError::NotTriangleFamily(format!(
                    "horizontal in row {ru} lacks the previous-row spine vertex"
                )))?;
            let e_left = graph.edge_between(apex, edge.u).ok_or_else(|| {
                CoveringError::NotTriangleFamily(format!(
                    "missing cross edge to x{ru},{iu}"
                ))
            })?;
            let e_right = graph.edge_between(apex, edge.v).ok_or_else(|| {
                CoveringError::NotTriangleFamily(format!(
                    "missing cross edge to x{ru},{iv}"
                ))
            })?;
            cells.push(CoveringCell {
                vertices: vec![apex, edge.u, edge.v],
                edges: vec![e_left, e_right, e],
            });
        } else if !((rv == ru + 1 && iu == 1) || (ru == rv + 1 && iv == 1)) {
            return Err(CoveringError::NotTriangleFamily(format!(
                "cross-row edge x{ru},{iu} ~ x{rv},{iv} does not leave a spine vertex"
            )));
        }
    }
    if horizontal_count == 0 {
        return Err(CoveringError::NotTriangleFamily(
            "no horizontal edges, so the cells cannot cover the vertex set".into(),
        ));
    }
    let cover = GoodCovering { cells, m: 2 };
    let report = validate_covering(graph, &cover);
    if !report.is_valid() {
        return Err(CoveringError::Invalid(format!(
            "constructed covering fails validation: {}",
            report.violations[0].detail
        )));
    }
    let phases = PhaseAssignment::from_canonical(graph, theta)?;
    Ok((cover, phases))
}

/// Holonomy (phase sum mod 2π) around a cell given as a closed triangle.
pub fn cell_holonomy<T: Scalar>(
    graph: &WeightedGraph<T>,
    theta: &PhaseAssignment<T>,
    cell: &CoveringCell,
) -> Result<T, CoveringError> {
    if cell.vertices.len() != 3 || cell.edges.len() != 3 {
        return Err(CoveringError::Invalid("holonomy needs a 3-cycle cell".into()));
    }
    let walk = [
        (cell.vertices[0], cell.vertices[1]),
        (cell.vertices[1], cell.vertices[2]),
        (cell.vertices[2], cell.vertices[0]),
    ];
    let mut total = T::zero();
    for (from, to) in walk {
        let e = graph
            .edge_between(from, to)
            .ok_or_else(|| CoveringError::Invalid("cell vertices do not form a cycle".into()))?;
        total += theta.theta_idx(graph, e, from);
    }
    Ok(crate::scalar::wrap_angle(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::LayeredFamilySpec;
    use crate::graph::{GraphBuilder, GraphBundle};
    use std::f64::consts::PI;

    fn flux_pi_cycle(mu: [f64; 3]) -> (WeightedGraph<f64>, PhaseAssignment<f64>) {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("a"), mu[0])
            .vertex(VertexId::named("b"), mu[1])
            .vertex(VertexId::named("c"), mu[2])
            .edge(VertexId::named("a"), VertexId::named("b"), 1.0)
            .edge(VertexId::named("b"), VertexId::named("c"), 1.0)
            .edge_with_theta(VertexId::named("a"), VertexId::named("c"), 1.0, PI);
        let built = b.build().unwrap();
        (built.graph, built.theta)
    }

    fn whole_graph_cell(g: &WeightedGraph<f64>) -> CoveringCell {
        CoveringCell {
            vertices: (0..g.vertex_count()).collect(),
            edges: (0..g.edge_count()).collect(),
        }
    }

    #[test]
    fn cell_eigenvalue_flux_pi_is_one() {
        let (g, theta) = flux_pi_cycle([1.0; 3]);
        let cell = whole_graph_cell(&g);
        let p = cell_lowest_eigenvalue(&g, &theta, &cell).unwrap();
        assert!((p - 1.0).abs() < 1e-10, "got {p}");
    }

    #[test]
    fn cell_eigenvalue_flux_free_is_zero() {
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("a"), 2.0)
            .vertex(VertexId::named("b"), 0.3)
            .edge(VertexId::named("a"), VertexId::named("b"), 5.0);
        let built = b.build().unwrap();
        let cell = whole_graph_cell(&built.graph);
        let p = cell_lowest_eigenvalue(&built.graph, &built.theta, &cell).unwrap();
        assert!(p.abs() < 1e-12);
    }

    #[test]
    fn cell_eigenvalue_nonuniform_mu_rayleigh_bound() {
        let (g, theta) = flux_pi_cycle([1.0, 0.5, 0.5]);
        let cell = whole_graph_cell(&g);
        let p = cell_lowest_eigenvalue(&g, &theta, &cell).unwrap();
        // lambda >= lambda_min(b=1 Laplacian)/max mu = 1
        assert!(p >= 1.0 - 1e-10, "got {p}");
        // oracle value 4 - 2*sqrt(2)
        assert!((p - (4.0 - 2.0 * 2.0f64.sqrt())).abs() < 1e-10);
    }

    #[test]
    fn single_cell_whole_graph_is_valid() {
        let (g, _) = flux_pi_cycle([1.0; 3]);
        let cover = GoodCovering {
            cells: vec![whole_graph_cell(&g)],
            m: 1,
        };
        assert!(validate_covering(&g, &cover).is_valid());
    }

    #[test]
    fn missing_edge_is_flagged() {
        let (g, _) = flux_pi_cycle([1.0; 3]);
        let cover = GoodCovering {
            cells: vec![CoveringCell {
                vertices: vec![0, 1, 2],
                edges: vec![0, 1],
            }],
            m: 1,
        };
        let report = validate_covering(&g, &cover);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == "edge uncovered"));
    }

    #[test]
    fn triangle_covering_cell_counts() {
        let spec = LayeredFamilySpec::triangular(1.0, 0.5).unwrap();
        let two = spec.generate(2).unwrap();
        let (cover, _) = triangle_covering(&two.graph).unwrap();
        assert_eq!(cover.cells.len(), 1);
        assert_eq!(cover.m, 2);
        let four = spec.generate(4).unwrap();
        let (cover, _) = triangle_covering(&four.graph).unwrap();
        // one horizontal per row 2..4 (rows of width 2)
        assert_eq!(cover.cells.len(), 3);
        let nine = spec.generate(9).unwrap();
        let (cover, _) = triangle_covering(&nine.graph).unwrap();
        let expect: u32 = (2..=9).map(|j| crate::families::ceil_sqrt(j) - 1).sum();
        assert_eq!(cover.cells.len(), expect as usize);
    }

    #[test]
    fn triangle_covering_holonomy_pi_per_cell() {
        let spec = LayeredFamilySpec::triangular(1.0, 0.5).unwrap();
        let bundle = spec.generate(10).unwrap();
        let (cover, theta) = triangle_covering(&bundle.graph).unwrap();
        for cell in &cover.cells {
            let hol = cell_holonomy(&bundle.graph, &theta, cell).unwrap();
            assert!(
                (hol.abs() - PI).abs() < 1e-12,
                "holonomy {hol} is not π mod 2π"
            );
        }
    }

    #[test]
    fn triangle_covering_rejects_other_graphs() {
        let spec = LayeredFamilySpec::bipartite();
        let bundle = spec.generate(4).unwrap();
        assert!(triangle_covering(&bundle.graph).is_err());
        let single = spec.generate(1).unwrap();
        assert!(triangle_covering(&single.graph).is_err());
    }

    #[test]
    fn effective_potential_triangular_minorant() {
        let spec = LayeredFamilySpec::triangular(1.0, 0.5).unwrap();
        let bundle = spec.generate(12).unwrap();
        let g = &bundle.graph;
        let (cover, theta) = triangle_covering(g).unwrap();
        let w_e = effective_potential(g, &theta, &cover).unwrap();
        // W_e(x_{1,1}) >= b_1/2
        let apex = g.idx(&VertexId::grid(1, 1)).unwrap();
        assert!(w_e[apex] >= 0.5 - 1e-9, "W_e(x11) = {}", w_e[apex]);
        // row j >= 2: W_e >= b_{j-1}/2
        for (i, label) in g.labels().iter().enumerate() {
            let (row, _) = label.grid_pos().unwrap();
            if row >= 2 {
                let minorant = spec.row_b(row - 1) / 2.0;
                assert!(
                    w_e[i] >= minorant - 1e-9,
                    "{label}: W_e = {} < {minorant}",
                    w_e[i]
                );
            }
        }
    }

    #[test]
    fn effective_potential_flux_free_vanishes() {
        let spec = LayeredFamilySpec::triangular(1.0, 0.5).unwrap();
        let bundle = spec.generate(6).unwrap();
        let g = &bundle.graph;
        let (cover, _) = triangle_covering(g).unwrap();
        let zero_theta = PhaseAssignment::zero(g);
        let w_e = effective_potential(g, &zero_theta, &cover).unwrap();
        for &w in &w_e {
            assert!(w.abs() < 1e-10);
        }
    }

    #[test]
    fn effective_potential_scales_linearly_in_b() {
        let (g, theta) = flux_pi_cycle([1.0, 0.7, 0.9]);
        let cover = GoodCovering {
            cells: vec![whole_graph_cell(&g)],
            m: 1,
        };
        let w1 = effective_potential(&g, &theta, &cover).unwrap();
        // rebuild with b scaled by 3
        let mut b = GraphBuilder::<f64>::new();
        b.vertex(VertexId::named("a"), 1.0)
            .vertex(VertexId::named("b"), 0.7)
            .vertex(VertexId::named("c"), 0.9)
            .edge(VertexId::named("a"), VertexId::named("b"), 3.0)
            .edge(VertexId::named("b"), VertexId::named("c"), 3.0)
            .edge_with_theta(VertexId::named("a"), VertexId::named("c"), 3.0, PI);
        let built = b.build().unwrap();
        let w3 = effective_potential(&built.graph, &built.theta, &cover).unwrap();
        for (a, b) in w1.iter().zip(&w3) {
            assert!((3.0 * a - b).abs() < 1e-12 * (b.abs() + 1.0));
        }
    }

    #[test]
    fn covering_bound_on_quadratic_form() {
        // (u, Hu) >= sum mu (W_e + W)|u|^2 for the triangle covering
        let spec = LayeredFamilySpec::triangular(1.0, 0.6).unwrap();
        let bundle = spec.generate(8).unwrap();
        let g = bundle.graph.clone();
        let (cover, theta) = triangle_covering(&g).unwrap();
        let w_e = effective_potential(&g, &theta, &cover).unwrap();
        let with_phases = GraphBundle::new(g.clone(), theta, bundle.potential.clone());
        let mut state = 7u64;
        let mut rng = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for _ in 0..25 {
            let u = crate::operators::MuVector::new(
                (0..g.vertex_count())
                    .map(|_| Complex::new(rng(), rng()))
                    .collect(),
            );
            let lhs = crate::operators::quadratic_form(&with_phases, &u);
            let mut rhs = 0.0;
            for i in 0..g.vertex_count() {
                rhs += g.mu(i) * (w_e[i] + with_phases.potential.get(i)) * u.values[i].norm_sqr();
            }
            let norm2 = u.norm_sqr(&g);
            assert!(lhs >= rhs - 1e-9 * norm2, "{lhs} < {rhs}");
        }
    }
}
