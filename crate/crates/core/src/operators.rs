//! Assembly and spectra of H = Δ_{b,μ;θ} + W.
//!
//! Two matrix forms are kept: the operator matrix A with
//! A[x][x] = Deg(x) + W(x), A[x][y] = −b(x,y)e^{iθ(x,y)}/μ(x), which acts on
//! functions, and the symmetrized S = D_μ^{1/2} A D_μ^{−1/2} with
//! S[x][y] = −b(x,y)e^{iθ(x,y)}/√(μ(x)μ(y)), which is Hermitian in the plain
//! ℓ² inner product and shares A's spectrum. Eigenvectors are returned
//! μ-orthonormal (as eigenvectors of A).

use num_complex::Complex;
use thiserror::Error;

use crate::graph::{GraphBundle, GraphError, PotentialAssignment, VertexId, WeightedGraph};
use crate::linalg::{self, LinalgError};
use crate::scalar::Scalar;

/// Matrices up to this size get a full dense eigendecomposition; larger ones
/// fall back to extremal eigenvalues via Lanczos.
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("vector has {got} entries, graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("q below one at vertex {0}")]
    QBelowOne(VertexId),
}

/// Complex amplitudes on the vertex set, measured in ℓ²_μ.
#[derive(Clone, Debug)]
pub struct MuVector<T> {
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> MuVector<T> {
    pub fn new(values: Vec<Complex<T>>) -> Self {
        MuVector { values }
    }

    pub fn zeros(n: usize) -> Self {
        MuVector {
            values: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    pub fn from_real(values: &[T]) -> Self {
        MuVector {
            values: values.iter().map(|&v| Complex::new(v, T::zero())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ‖u‖² = Σ μ(x)|u(x)|².
    pub fn norm_sqr(&self, graph: &WeightedGraph<T>) -> T {
        self.values
            .iter()
            .zip(graph.mu_values())
            .map(|(z, &m)| m * z.norm_sqr())
            .sum()
    }

    pub fn norm(&self, graph: &WeightedGraph<T>) -> T {
        self.norm_sqr(graph).sqrt()
    }
}

/// (u, v)_μ = Σ μ(x) u(x) conj(v(x)).
pub fn mu_inner<T: Scalar>(graph: &WeightedGraph<T>, u: &MuVector<T>, v: &MuVector<T>) -> Complex<T> {
    u.values
        .iter()
        .zip(&v.values)
        .zip(graph.mu_values())
        .fold(Complex::new(T::zero(), T::zero()), |acc, ((a, b), &m)| {
            acc + (*a * b.conj()).scale(m)
        })
}

/// Pointwise application (Hu)(x) = (1/μ(x)) Σ_y b(x,y)(u(x) − e^{iθ(x,y)}u(y)) + W(x)u(x),
/// no matrix assembly.
pub fn apply<T: Scalar>(bundle: &GraphBundle<T>, u: &MuVector<T>) -> Result<MuVector<T>, OperatorError> {
    let g = &bundle.graph;
    let n = g.vertex_count();
    if u.len() != n {
        return Err(OperatorError::DimensionMismatch {
            expected: n,
            got: u.len(),
        });
    }
    let mut out = MuVector::zeros(n);
    for x in 0..n {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(y, e) in g.adjacency(x) {
            let b = g.edges()[e].b;
            let theta = bundle.theta.theta_idx(g, e, x);
            let hop = Complex::from_polar(T::one(), theta);
            acc += (u.values[x] - hop * u.values[y]).scale(b);
        }
        out.values[x] = acc.unscale(g.mu(x)) + u.values[x].scale(bundle.potential.get(x));
    }
    Ok(out)
}

/// Assembled operator: sparse canonical-edge storage plus dense A and S when
/// the size allows.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<T> {
    pub n: usize,
    /// Deg(x) + W(x), the shared real diagonal of A and S.
    pub diag: Vec<T>,
    pub mu: Vec<T>,
    /// Per canonical edge (u < v): (u, v, S[u][v]).
    pub offdiag: Vec<(usize, usize, Complex<T>)>,
    pub dense_a: Option<Vec<Complex<T>>>,
    pub dense_s: Option<Vec<Complex<T>>>,
}

impl<T: Scalar> OperatorMatrix<T> {
    /// y ← S x using the sparse representation.
    pub fn apply_symmetrized(&self, x: &[Complex<T>], y: &mut [Complex<T>]) {
        for i in 0..self.n {
            y[i] = x[i].scale(self.diag[i]);
        }
        for &(u, v, s) in &self.offdiag {
            y[u] += s * x[v];
            y[v] += s.conj() * x[u];
        }
    }
}

/// Builds A and S from a bundle. Dense blocks are materialized when
/// n ≤ `dense_limit`.
pub fn assemble_with_limit<T: Scalar>(bundle: &GraphBundle<T>, dense_limit: usize) -> OperatorMatrix<T> {
    let g = &bundle.graph;
    let n = g.vertex_count();
    let mut diag = Vec::with_capacity(n);
    for x in 0..n {
        diag.push(g.weighted_degree_idx(x) + bundle.potential.get(x));
    }
    let mut offdiag = Vec::with_capacity(g.edge_count());
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.u == edge.v {
            continue;
        }
        let theta = bundle.theta.canonical(e);
        let hop = Complex::from_polar(T::one(), theta);
        let s_uv = -hop.scale(edge.b / (g.mu(edge.u) * g.mu(edge.v)).sqrt());
        offdiag.push((edge.u, edge.v, s_uv));
    }

    let (dense_a, dense_s) = if n <= dense_limit {
        let zero = Complex::new(T::zero(), T::zero());
        let mut a = vec![zero; n * n];
        let mut s = vec![zero; n * n];
        for x in 0..n {
            a[x * n + x] = Complex::new(diag[x], T::zero());
            s[x * n + x] = Complex::new(diag[x], T::zero());
        }
        for (e, edge) in g.edges().iter().enumerate() {
            if edge.u == edge.v {
                continue;
            }
            let theta = bundle.theta.canonical(e);
            let hop = Complex::from_polar(T::one(), theta);
            let (u, v) = (edge.u, edge.v);
            a[u * n + v] = -hop.scale(edge.b / g.mu(u));
            a[v * n + u] = -hop.conj().scale(edge.b / g.mu(v));
            let s_uv = -hop.scale(edge.b / (g.mu(u) * g.mu(v)).sqrt());
            s[u * n + v] = s_uv;
            s[v * n + u] = s_uv.conj();
        }
        (Some(a), Some(s))
    } else {
        (None, None)
    };

    OperatorMatrix {
        n,
        diag,
        mu: g.mu_values().to_vec(),
        offdiag,
        dense_a,
        dense_s,
    }
}

pub fn assemble<T: Scalar>(bundle: &GraphBundle<T>) -> OperatorMatrix<T> {
    assemble_with_limit(bundle, DEFAULT_DENSE_LIMIT)
}

/// Eigenvalues ascending. For dense solves all of them with μ-orthonormal
/// eigenvectors; above the dense limit only the extremal pair, without
/// vectors. `residual` is max ‖Sv − λv‖/‖v‖ over the computed pairs.
#[derive(Clone, Debug)]
pub struct SpectralResult<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Option<Vec<MuVector<T>>>,
    pub residual: T,
    pub extremal_only: bool,
}

impl<T: Scalar> SpectralResult<T> {
    pub fn lowest(&self) -> T {
        self.eigenvalues[0]
    }
}

pub fn spectrum<T: Scalar>(op: &OperatorMatrix<T>) -> Result<SpectralResult<T>, OperatorError> {
    spectrum_with(op, true)
}

/// `want_vectors` skips eigenvector accumulation on the dense path (the
/// residual is then checked on the symmetrized form re-solved vectors of the
/// extremal pair via Lanczos bounds; for plain eigenvalue scans that is
/// usually what is wanted).
pub fn spectrum_with<T: Scalar>(
    op: &OperatorMatrix<T>,
    want_vectors: bool,
) -> Result<SpectralResult<T>, OperatorError> {
    let n = op.n;
    if let Some(s) = &op.dense_s {
        let eig = linalg::hermitian_eigen(s, n, true)?;
        let vec_raw = eig.vectors.expect("vectors requested");
        // Residual on S with the sparse apply.
        let mut worst = T::zero();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); n];
        for k in 0..n {
            let col = &vec_raw[k * n..(k + 1) * n];
            op.apply_symmetrized(col, &mut scratch);
            let lam = eig.values[k];
            let mut err = T::zero();
            let mut nrm = T::zero();
            for i in 0..n {
                err += (scratch[i] - col[i].scale(lam)).norm_sqr();
                nrm += col[i].norm_sqr();
            }
            let r = err.sqrt() / nrm.sqrt();
            if r > worst {
                worst = r;
            }
        }
        // μ-orthonormal eigenvectors of A: u = D_μ^{−1/2} v.
        let eigenvectors = want_vectors.then(|| {
            (0..n)
                .map(|k| {
                    let col = &vec_raw[k * n..(k + 1) * n];
                    MuVector::new(
                        col.iter()
                            .zip(&op.mu)
                            .map(|(z, &m)| z.unscale(m.sqrt()))
                            .collect(),
                    )
                })
                .collect()
        });
        Ok(SpectralResult {
            eigenvalues: eig.values,
            eigenvectors,
            residual: worst,
            extremal_only: false,
        })
    } else {
        let matvec = |x: &[Complex<T>], y: &mut [Complex<T>]| op.apply_symmetrized(x, y);
        let (lo, hi, res) = linalg::lanczos_extremal(n, matvec, 300, T::real(1e-10))?;
        Ok(SpectralResult {
            eigenvalues: vec![lo, hi],
            eigenvectors: None,
            residual: res,
            extremal_only: true,
        })
    }
}

/// Lowest eigenpair of H, μ-orthonormalized. Used by the identity checks.
pub fn lowest_eigenpair<T: Scalar>(bundle: &GraphBundle<T>) -> Result<(T, MuVector<T>), OperatorError> {
    let op = assemble(bundle);
    let spec = spectrum(&op)?;
    let v = spec
        .eigenvectors
        .as_ref()
        .expect("dense path returns vectors")[0]
        .clone();
    Ok((spec.eigenvalues[0], v))
}

/// Energy form (u, Hu) as the explicit edge sum
/// Σ_{{x,y}∈E} b(x,y)|u(x) − e^{iθ(x,y)}u(y)|² + Σ_x μ(x)W(x)|u(x)|².
pub fn quadratic_form<T: Scalar>(bundle: &GraphBundle<T>, u: &MuVector<T>) -> T {
    let g = &bundle.graph;
    let mut edge_sum = T::zero();
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.u == edge.v {
            continue;
        }
        let hop = Complex::from_polar(T::one(), bundle.theta.canonical(e));
        edge_sum += edge.b * (u.values[edge.u] - hop * u.values[edge.v]).norm_sqr();
    }
    let potential_sum: T = (0..g.vertex_count())
        .map(|x| g.mu(x) * bundle.potential.get(x) * u.values[x].norm_sqr())
        .sum();
    edge_sum + potential_sum
}

/// Gauge change θ'(x,y) = θ(x,y) + τ(y) − τ(x); b, μ, W untouched. The
/// spectrum is invariant.
pub fn gauge_transform<T: Scalar>(bundle: &GraphBundle<T>, tau: &[T]) -> Result<GraphBundle<T>, OperatorError> {
    let g = &bundle.graph;
    if tau.len() != g.vertex_count() {
        return Err(OperatorError::DimensionMismatch {
            expected: g.vertex_count(),
            got: tau.len(),
        });
    }
    let values = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| bundle.theta.canonical(e) + tau[edge.v] - tau[edge.u])
        .collect();
    let theta = crate::graph::PhaseAssignment::from_canonical(g, values)?;
    let mut out = bundle.clone();
    out.theta = theta;
    Ok(out)
}

/// T_u = (Σ_{x,y} b(x,y) min{q(x)^{−1}, q(y)^{−1}} |u(x) − e^{iθ}u(y)|²)^{1/2}
/// with the ordered-pair double sum (each unordered edge counted twice).
pub fn graph_energy_q<T: Scalar>(
    bundle: &GraphBundle<T>,
    q: &PotentialAssignment<T>,
    u: &MuVector<T>,
) -> Result<T, OperatorError> {
    let g = &bundle.graph;
    for x in 0..g.vertex_count() {
        if !(q.get(x) >= T::one()) {
            return Err(OperatorError::QBelowOne(g.label(x).clone()));
        }
    }
    let mut sum = T::zero();
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.u == edge.v {
            continue;
        }
        let hop = Complex::from_polar(T::one(), bundle.theta.canonical(e));
        let min_inv_q = q.get(edge.u).max(q.get(edge.v)).recip();
        sum += edge.b * min_inv_q * (u.values[edge.u] - hop * u.values[edge.v]).norm_sqr();
    }
    Ok((sum + sum).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{GraphBuilder, PotentialAssignment, VertexId};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn two_vertex_bundle(b: f64, mu: (f64, f64), theta: f64) -> GraphBundle<f64> {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("v0"), mu.0)
            .vertex(VertexId::named("v1"), mu.1)
            .edge_with_theta(VertexId::named("v0"), VertexId::named("v1"), b, theta);
        let built = builder.build().unwrap();
        let potential = PotentialAssignment::zero(&built.graph);
        GraphBundle::new(built.graph, built.theta, potential)
    }

    fn three_cycle(thetas: [f64; 3], mu: [f64; 3]) -> GraphBundle<f64> {
        let mut builder = GraphBuilder::<f64>::new();
        builder
            .vertex(VertexId::named("a"), mu[0])
            .vertex(VertexId::named("b"), mu[1])
            .vertex(VertexId::named("c"), mu[2])
            .edge_with_theta(VertexId::named("a"), VertexId::named("b"), 1.0, thetas[0])
            .edge_with_theta(VertexId::named("b"), VertexId::named("c"), 1.0, thetas[1])
            .edge_with_theta(VertexId::named("a"), VertexId::named("c"), 1.0, thetas[2]);
        let built = builder.build().unwrap();
        let potential = PotentialAssignment::zero(&built.graph);
        GraphBundle::new(built.graph, built.theta, potential)
    }

    #[test]
    fn apply_matches_hand_formula() {
        let bundle = two_vertex_bundle(1.0, (1.0, 1.0), 0.0);
        let u = MuVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let hu = apply(&bundle, &u).unwrap();
        assert!((hu.values[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((hu.values[1] - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constants_in_kernel() {
        let bundle = three_cycle([0.0; 3], [1.0, 2.0, 0.5]);
        let u = MuVector::new(vec![c(1.0, 0.0); 3]);
        let hu = apply(&bundle, &u).unwrap();
        for z in &hu.values {
            assert!(z.norm() < 1e-14);
        }
        assert!(quadratic_form(&bundle, &u).abs() < 1e-14);
    }

    #[test]
    fn assemble_identity_two_vertex() {
        let bundle = two_vertex_bundle(1.0, (1.0, 1.0), 0.0);
        let op = assemble(&bundle);
        let a = op.dense_a.as_ref().unwrap();
        let expect = [c(1.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        for (got, want) in a.iter().zip(expect.iter()) {
            assert!((got - want).norm() < 1e-15);
        }
    }

    #[test]
    fn assemble_half_pi_phase_mu_weights() {
        let bundle = two_vertex_bundle(1.0, (1.0, 2.0), PI / 2.0);
        let op = assemble(&bundle);
        let a = op.dense_a.as_ref().unwrap();
        let s = op.dense_s.as_ref().unwrap();
        assert!((a[1] - c(0.0, -1.0)).norm() < 1e-15, "A[0][1] = -i, got {}", a[1]);
        assert!((a[2] - c(0.0, 0.5)).norm() < 1e-15, "A[1][0] = i/2, got {}", a[2]);
        assert!(
            (s[1] - c(0.0, -1.0 / 2.0f64.sqrt())).norm() < 1e-15,
            "S[0][1] = -i/sqrt(2), got {}",
            s[1]
        );
    }

    #[test]
    fn symmetrization_is_similarity() {
        // A = D^{-1/2} S D^{1/2} entrywise.
        let bundle = two_vertex_bundle(2.5, (0.4, 3.0), 1.1);
        let op = assemble(&bundle);
        let n = op.n;
        let a = op.dense_a.as_ref().unwrap();
        let s = op.dense_s.as_ref().unwrap();
        for i in 0..n {
            for j in 0..n {
                let expect = s[i * n + j].scale((op.mu[j] / op.mu[i]).sqrt());
                let rel = (a[i * n + j] - expect).norm() / (expect.norm() + 1e-30);
                assert!(rel < 1e-14, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn single_edge_spectrum_is_zero_two() {
        for theta in [0.0, 0.3, PI] {
            let bundle = two_vertex_bundle(1.0, (1.0, 1.0), theta);
            let spec = spectrum(&assemble(&bundle)).unwrap();
            assert!((spec.eigenvalues[0] - 0.0).abs() < 1e-12);
            assert!((spec.eigenvalues[1] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn flux_pi_cycle_lowest_eigenvalue_one() {
        let bundle = three_cycle([0.0, 0.0, PI], [1.0; 3]);
        let spec = spectrum(&assemble(&bundle)).unwrap();
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(spec.residual < 1e-10 * (spec.eigenvalues[2].abs() + 1.0));
    }

    #[test]
    fn flux_free_cycle_has_kernel() {
        let bundle = three_cycle([0.0; 3], [1.0; 3]);
        let spec = spectrum(&assemble(&bundle)).unwrap();
        assert!(spec.eigenvalues[0].abs() < 1e-12);
    }

    #[test]
    fn quadratic_form_single_excitation() {
        let bundle = two_vertex_bundle(1.0, (1.0, 1.0), 0.0);
        let u = MuVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((quadratic_form(&bundle, &u) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauge_transform_trivial_and_tree() {
        let bundle = two_vertex_bundle(1.0, (1.0, 1.0), 0.8);
        let same = gauge_transform(&bundle, &[0.0, 0.0]).unwrap();
        assert!((same.theta.canonical(0) - 0.8).abs() < 1e-15);
        // τ = (0, −θ) gauges the phase away on a single edge.
        let gauged = gauge_transform(&bundle, &[0.0, -0.8]).unwrap();
        assert!(gauged.theta.canonical(0).abs() < 1e-15);
    }

    #[test]
    fn graph_energy_counts_ordered_pairs() {
        let bundle = two_vertex_bundle(1.0, (1.0, 1.0), 0.0);
        let g = &bundle.graph;
        let q = PotentialAssignment::from_values(g, vec![1.0, 1.0]).unwrap();
        let u = MuVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let t = graph_energy_q(&bundle, &q, &u).unwrap();
        assert!((t * t - 2.0).abs() < 1e-14, "ordered-pair sum is 2, got {}", t * t);
    }

    #[test]
    fn graph_energy_constant_vanishes() {
        let bundle = three_cycle([0.0; 3], [1.0, 1.0, 1.0]);
        let q = PotentialAssignment::from_values(&bundle.graph, vec![2.0, 3.0, 1.5]).unwrap();
        let u = MuVector::new(vec![c(2.0, 1.0); 3]);
        let t = graph_energy_q(&bundle, &q, &u).unwrap();
        assert!(t.abs() < 1e-14);
    }

    #[test]
    fn orientation_independence_of_hop_difference() {
        let bundle = three_cycle([0.7, -1.2, 2.9], [1.0, 2.0, 3.0]);
        let g = &bundle.graph;
        let u = MuVector::new(vec![c(0.3, -1.0), c(1.2, 0.4), c(-0.5, 0.9)]);
        for (e, edge) in g.edges().iter().enumerate() {
            let th_uv = bundle.theta.theta_idx(g, e, edge.u);
            let th_vu = bundle.theta.theta_idx(g, e, edge.v);
            let d_uv = (u.values[edge.u] - Complex::from_polar(1.0, th_uv) * u.values[edge.v]).norm();
            let d_vu = (u.values[edge.v] - Complex::from_polar(1.0, th_vu) * u.values[edge.u]).norm();
            assert!((d_uv - d_vu).abs() < 1e-14);
        }
    }

    #[test]
    fn iterative_path_matches_dense_extremes() {
        let bundle = three_cycle([0.0, 0.0, PI], [1.0, 2.0, 0.5]);
        let dense = spectrum(&assemble(&bundle)).unwrap();
        let sparse_op = assemble_with_limit(&bundle, 0);
        assert!(sparse_op.dense_s.is_none());
        let spec = spectrum(&sparse_op).unwrap();
        assert!(spec.extremal_only);
        assert!((spec.eigenvalues[0] - dense.eigenvalues[0]).abs() < 1e-9);
        assert!((spec.eigenvalues[1] - dense.eigenvalues[2]).abs() < 1e-9);
    }

    #[test]
    fn apply_matches_assembled_matrix() {
        let bundle = three_cycle([0.4, 1.9, -2.2], [0.7, 1.3, 2.2]);
        let w = PotentialAssignment::from_values(&bundle.graph, vec![0.5, -1.0, 2.0]).unwrap();
        let bundle = GraphBundle::new(bundle.graph, bundle.theta, w);
        let op = assemble(&bundle);
        let a = op.dense_a.as_ref().unwrap();
        let u = MuVector::new(vec![c(0.1, 0.2), c(-0.3, 0.5), c(0.9, -0.1)]);
        let hu = apply(&bundle, &u).unwrap();
        for i in 0..3 {
            let mut acc = c(0.0, 0.0);
            for j in 0..3 {
                acc += a[i * 3 + j] * u.values[j];
            }
            assert!(
                (acc - hu.values[i]).norm() < 1e-13 * (acc.norm() + 1.0),
                "row {i}: {acc} vs {}",
                hu.values[i]
            );
        }
    }
}
