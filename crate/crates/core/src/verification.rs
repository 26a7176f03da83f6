//! Numerical verification of the identities and inequalities behind the
//! criteria, on finite instances: the ground-state energy identity, the
//! commutator-expansion identity and bound for the rescaled energy, cutoff
//! function properties, the covering bound, and the basic operator identities
//! (quadratic form, Hermiticity, gauge invariance, non-negativity).
//!
//! These double as the randomized property-test surface: every checker runs
//! against seeded random bundles.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::covering::{self, CoveringError, GoodCovering};
use crate::graph::{
    GraphBuilder, GraphBundle, GraphError, PotentialAssignment, VertexId,
};
use crate::metrics::{self, EdgeLengthAssignment, MetricError};
use crate::operators::{self, MuVector, OperatorError};

/// Relative tolerance for identities (double precision over ≤ 10⁴ terms).
pub const REL_TOL: f64 = 1e-9;
/// Absolute floor below which an identity is accepted outright.
pub const ABS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("cutoff parameters must satisfy 0 < eps < rho < 1/2 and R > 1")]
    CutoffParameters,
    #[error("enlarge truncation: ball of radius {radius} reaches the frontier")]
    EnlargeTruncation { radius: f64 },
}

/// Two-sided comparison of a verified identity (or one-sided slack of a
/// verified inequality, in which case `abs_err` is the violation).
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheckResult {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub passes: bool,
}

impl IdentityCheckResult {
    fn equality(lhs: f64, rhs: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs());
        let rel_err = if scale > 0.0 { abs_err / scale } else { 0.0 };
        IdentityCheckResult {
            lhs,
            rhs,
            abs_err,
            rel_err,
            passes: rel_err <= REL_TOL || abs_err <= ABS_TOL,
        }
    }

    /// lhs ≤ rhs up to one-sided slack.
    fn upper_bound(lhs: f64, rhs: f64, slack: f64) -> Self {
        let violation = (lhs - rhs).max(0.0);
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        IdentityCheckResult {
            lhs,
            rhs,
            abs_err: violation,
            rel_err: violation / scale,
            passes: lhs <= rhs + slack,
        }
    }
}

// ---------------------------------------------------------------------------
// Identity checks

/// Ground-state energy identity: with (λ₀, v₀) the lowest eigenpair of H and
/// f real and finitely supported,
/// (f v₀, (H−λ₀)(f v₀)) = ½ Σ_x Σ_{y~x} b(x,y) Re[e^{−iθ(x,y)} v₀(x) conj(v₀(y))] (f(x)−f(y))².
pub fn verify_lemma21(bundle: &GraphBundle<f64>, f: &[f64]) -> Result<IdentityCheckResult, VerifyError> {
    let g = &bundle.graph;
    if f.len() != g.vertex_count() {
        return Err(GraphError::DimensionMismatch {
            expected: g.vertex_count(),
            got: f.len(),
        }
        .into());
    }
    let (lambda0, v0) = operators::lowest_eigenpair(bundle)?;
    let fv = MuVector::new(
        v0.values
            .iter()
            .zip(f)
            .map(|(z, &fi)| z.scale(fi))
            .collect(),
    );
    let h_fv = operators::apply(bundle, &fv)?;
    let shifted = MuVector::new(
        h_fv.values
            .iter()
            .zip(&fv.values)
            .map(|(h, x)| h - x.scale(lambda0))
            .collect(),
    );
    let lhs = operators::mu_inner(g, &fv, &shifted).conj().re;
    // The two orientations of each edge contribute equally, cancelling the 1/2.
    let mut rhs = 0.0;
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.u == edge.v {
            continue;
        }
        let theta = bundle.theta.canonical(e);
        let hop = Complex::from_polar(1.0, -theta);
        let re = (hop * v0.values[edge.u] * v0.values[edge.v].conj()).re;
        let df = f[edge.u] - f[edge.v];
        rhs += edge.b * re * df * df;
    }
    Ok(IdentityCheckResult::equality(lhs, rhs))
}

/// Expansion identity for the weighted energy: with φ real and finitely
/// supported and I² = Σ_{x,y} b|u(x)−e^{iθ}u(y)|²(φ(x)²+φ(y)²),
/// I² = 4(φ²Hu, u) − 4(φ²Wu, u)
///      + Σ_{x,y} b (e^{iθ}u(y)−u(x))(e^{−iθ}conj(u(y))+conj(u(x)))(φ(x)²−φ(y)²).
pub fn verify_prop41_identity(
    bundle: &GraphBundle<f64>,
    u: &MuVector<f64>,
    phi: &[f64],
) -> Result<IdentityCheckResult, VerifyError> {
    let g = &bundle.graph;
    if phi.len() != g.vertex_count() || u.len() != g.vertex_count() {
        return Err(GraphError::DimensionMismatch {
            expected: g.vertex_count(),
            got: phi.len().min(u.len()),
        }
        .into());
    }
    let mut i_sq = 0.0;
    let mut third = Complex::new(0.0, 0.0);
    for (e, edge) in g.edges().iter().enumerate() {
        if edge.u == edge.v {
            continue;
        }
        let (x, y) = (edge.u, edge.v);
        let phi2 = (phi[x] * phi[x], phi[y] * phi[y]);
        for (from, to, sign) in [(x, y, 1.0), (y, x, -1.0)] {
            let theta = bundle.theta.theta_idx(g, e, from);
            let hop = Complex::from_polar(1.0, theta);
            let diff = u.values[from] - hop * u.values[to];
            i_sq += edge.b * diff.norm_sqr() * (phi2.0 + phi2.1);
            let _ = sign;
            let phi_diff = phi[from] * phi[from] - phi[to] * phi[to];
            let factor = (hop * u.values[to] - u.values[from])
                * (hop.conj() * u.values[to].conj() + u.values[from].conj());
            third += factor.scale(edge.b * phi_diff);
        }
    }
    let hu = operators::apply(bundle, u)?;
    let mut quad = Complex::new(0.0, 0.0);
    let mut wterm = Complex::new(0.0, 0.0);
    for x in 0..g.vertex_count() {
        let mu_phi2 = g.mu(x) * phi[x] * phi[x];
        quad += (hu.values[x] * u.values[x].conj()).scale(mu_phi2);
        wterm += (u.values[x] * u.values[x].conj()).scale(mu_phi2 * bundle.potential.get(x));
    }
    let rhs = quad.scale(4.0) - wterm.scale(4.0) + third;
    // imaginary parts must cancel; fold any residue into the error
    let scale = i_sq.abs().max(rhs.re.abs()).max(1.0);
    if rhs.im.abs() > 1e-10 * scale {
        return Ok(IdentityCheckResult {
            lhs: i_sq,
            rhs: rhs.re,
            abs_err: rhs.im.abs(),
            rel_err: rhs.im.abs() / scale,
            passes: false,
        });
    }
    Ok(IdentityCheckResult::equality(i_sq, rhs.re))
}

/// Energy-domination bound: T_u² ≤ 4(‖Hu‖‖u‖ + (K²+1)‖u‖²), requiring σ
/// strongly intrinsic, q ≥ 1 and W ≥ −q. Precondition violations are
/// reported as errors, not failures.
pub fn verify_prop41_bound(
    bundle: &GraphBundle<f64>,
    sigma: &EdgeLengthAssignment<f64>,
    q: &PotentialAssignment<f64>,
    u: &MuVector<f64>,
) -> Result<IdentityCheckResult, VerifyError> {
    let g = &bundle.graph;
    let strong = metrics::check_strongly_intrinsic(g, sigma);
    if !strong.passes {
        return Err(VerifyError::Precondition(format!(
            "sigma is not strongly intrinsic (ratio {} at {})",
            strong.max_ratio, strong.worst_vertex
        )));
    }
    for x in 0..g.vertex_count() {
        if q.get(x) < 1.0 {
            return Err(VerifyError::Precondition(format!(
                "q below one at {}",
                g.label(x)
            )));
        }
        if bundle.potential.get(x) < -q.get(x) {
            return Err(VerifyError::Precondition(format!(
                "W < -q at {}",
                g.label(x)
            )));
        }
    }
    let q_inv_sqrt: Vec<f64> = q.values().iter().map(|&v| v.powf(-0.5)).collect();
    let k = metrics::lipschitz_constant(g, sigma, &q_inv_sqrt);
    let t_u = operators::graph_energy_q(bundle, q, u)?;
    let hu = operators::apply(bundle, u)?;
    let hu_norm = hu.norm(g);
    let u_norm = u.norm(g);
    let rhs = 4.0 * (hu_norm * u_norm + (k * k + 1.0) * u_norm * u_norm);
    Ok(IdentityCheckResult::upper_bound(t_u * t_u, rhs, 1e-9 * (1.0 + rhs)))
}

/// The six-piece cutoff profile used in the incompleteness argument.
pub fn cutoff_f(eps: f64, rho: f64, r: f64, s: f64) -> f64 {
    if s <= eps {
        0.0
    } else if s <= rho {
        rho * (s - eps) / (rho - eps)
    } else if s <= 1.0 {
        s
    } else if s <= r {
        1.0
    } else if s <= r + 1.0 {
        r + 1.0 - s
    } else {
        0.0
    }
}

/// Checks the piecewise definition of the cutoff on a grid and its Lipschitz
/// bound |F(s)−F(t)| ≤ (ρ/(ρ−ε))|s−t| on sampled pairs.
pub fn verify_cutoff_f(
    eps: f64,
    rho: f64,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<IdentityCheckResult, VerifyError> {
    if !(0.0 < eps && eps < rho && rho < 0.5 && r > 1.0) {
        return Err(VerifyError::CutoffParameters);
    }
    let beta = rho / (rho - eps);
    // anchor values of the definition
    let anchors = [
        (0.0, 0.0),
        (eps, 0.0),
        (rho, rho),
        (0.5 * (rho + 1.0), 0.5 * (rho + 1.0)),
        (1.0, 1.0),
        (0.5 * (1.0 + r), 1.0),
        (r, 1.0),
        (r + 0.5, 0.5),
        (r + 1.0, 0.0),
        (r + 2.0, 0.0),
    ];
    let mut worst_anchor = 0.0f64;
    for &(s, expect) in &anchors {
        worst_anchor = worst_anchor.max((cutoff_f(eps, rho, r, s) - expect).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_slope = 0.0f64;
    for _ in 0..samples {
        let s = rng.gen_range(0.0..r + 2.0);
        let t = rng.gen_range(0.0..r + 2.0);
        if (s - t).abs() < 1e-12 {
            continue;
        }
        let slope = (cutoff_f(eps, rho, r, s) - cutoff_f(eps, rho, r, t)).abs() / (s - t).abs();
        max_slope = max_slope.max(slope);
    }
    let mut result = IdentityCheckResult::upper_bound(max_slope, beta, 1e-12);
    result.abs_err = result.abs_err.max(worst_anchor);
    result.passes = result.passes && worst_anchor <= ABS_TOL;
    Ok(result)
}

/// Ball cutoffs χ_n(x) = ((2n − d_σ(x₀,x))/n ∨ 0) ∧ 1: range, plateau/support,
/// and the edgewise bound |χ_n(x)−χ_n(y)| ≤ σ(x,y)/n. Errors if the 2n-ball
/// is not contained in the truncation.
pub fn verify_chi_n(
    bundle: &GraphBundle<f64>,
    len: &EdgeLengthAssignment<f64>,
    x0: &VertexId,
    n: f64,
) -> Result<IdentityCheckResult, VerifyError> {
    let g = &bundle.graph;
    let dist = metrics::path_metric(g, len, x0)?;
    for &f in &bundle.frontier {
        if dist[f] <= 2.0 * n {
            return Err(VerifyError::EnlargeTruncation { radius: 2.0 * n });
        }
    }
    let chi: Vec<f64> = dist
        .iter()
        .map(|&d| ((2.0 * n - d) / n).clamp(0.0, 1.0))
        .collect();
    let mut worst = 0.0f64;
    for (i, &d) in dist.iter().enumerate() {
        if !(0.0..=1.0).contains(&chi[i]) {
            worst = worst.max(chi[i].abs().max((chi[i] - 1.0).abs()));
        }
        if d <= n {
            worst = worst.max((chi[i] - 1.0).abs());
        }
        if d > 2.0 * n {
            worst = worst.max(chi[i].abs());
        }
    }
    let mut max_excess = 0.0f64;
    for (e, edge) in g.edges().iter().enumerate() {
        let bound = len.len(e) / n;
        let diff = (chi[edge.u] - chi[edge.v]).abs();
        max_excess = max_excess.max(diff - bound);
    }
    Ok(IdentityCheckResult {
        lhs: worst.max(max_excess),
        rhs: 0.0,
        abs_err: worst.max(max_excess.max(0.0)),
        rel_err: worst.max(max_excess.max(0.0)),
        passes: worst <= ABS_TOL && max_excess <= ABS_TOL,
    })
}

// ---------------------------------------------------------------------------
// Operator identity checks (randomized suite surface)

/// Edge-sum quadratic form equals Re (Hu, u)_μ.
pub fn verify_quadratic_form(bundle: &GraphBundle<f64>, u: &MuVector<f64>) -> Result<IdentityCheckResult, VerifyError> {
    let lhs = operators::quadratic_form(bundle, u);
    let hu = operators::apply(bundle, u)?;
    let rhs = operators::mu_inner(&bundle.graph, &hu, u).re;
    Ok(IdentityCheckResult::equality(lhs, rhs))
}

/// (Hu, v) = (u, Hv) within 1e−10·‖u‖‖v‖.
pub fn verify_hermiticity(
    bundle: &GraphBundle<f64>,
    u: &MuVector<f64>,
    v: &MuVector<f64>,
) -> Result<IdentityCheckResult, VerifyError> {
    let g = &bundle.graph;
    let hu = operators::apply(bundle, u)?;
    let hv = operators::apply(bundle, v)?;
    let lhs = operators::mu_inner(g, &hu, v);
    let rhs = operators::mu_inner(g, u, &hv);
    let defect = (lhs - rhs).norm();
    let scale = u.norm(g) * v.norm(g);
    Ok(IdentityCheckResult {
        lhs: lhs.re,
        rhs: rhs.re,
        abs_err: defect,
        rel_err: if scale > 0.0 { defect / scale } else { 0.0 },
        passes: defect <= 1e-10 * scale.max(1e-300),
    })
}

/// Spectrum is invariant under θ(x,y) ↦ θ(x,y) + τ(y) − τ(x).
pub fn verify_gauge_invariance(bundle: &GraphBundle<f64>, tau: &[f64]) -> Result<IdentityCheckResult, VerifyError> {
    let before = operators::spectrum_with(&operators::assemble(bundle), false)?;
    let transformed = operators::gauge_transform(bundle, tau)?;
    let after = operators::spectrum_with(&operators::assemble(&transformed), false)?;
    let mut max_shift = 0.0f64;
    for (a, b) in before.eigenvalues.iter().zip(&after.eigenvalues) {
        max_shift = max_shift.max((a - b).abs());
    }
    let scale = before
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    Ok(IdentityCheckResult {
        lhs: max_shift,
        rhs: 0.0,
        abs_err: max_shift,
        rel_err: if scale > 0.0 { max_shift / scale } else { 0.0 },
        passes: max_shift <= 1e-8 * (1.0 + scale),
    })
}

/// The magnetic Laplacian (W ≡ 0) is non-negative: quadratic form ≥ −1e−12‖u‖².
pub fn verify_nonnegativity(bundle: &GraphBundle<f64>, u: &MuVector<f64>) -> IdentityCheckResult {
    let mut flux_only = bundle.clone();
    flux_only.potential = PotentialAssignment::zero(&bundle.graph);
    let value = operators::quadratic_form(&flux_only, u);
    let norm2 = u.norm_sqr(&bundle.graph);
    IdentityCheckResult {
        lhs: value,
        rhs: 0.0,
        abs_err: (-value).max(0.0),
        rel_err: if norm2 > 0.0 { (-value).max(0.0) / norm2 } else { 0.0 },
        passes: value >= -1e-12 * norm2.max(1e-300),
    }
}

/// Covering bound: (u, Hu) ≥ Σ μ(x)(W_e(x)+W(x))|u(x)|² − 1e−9‖u‖².
pub fn verify_covering_bound(
    bundle: &GraphBundle<f64>,
    cover: &GoodCovering,
    u: &MuVector<f64>,
) -> Result<IdentityCheckResult, VerifyError> {
    let g = &bundle.graph;
    let w_e = covering::effective_potential(g, &bundle.theta, cover)?;
    let lhs = operators::quadratic_form(bundle, u);
    let mut rhs = 0.0;
    for x in 0..g.vertex_count() {
        rhs += g.mu(x) * (w_e[x] + bundle.potential.get(x)) * u.values[x].norm_sqr();
    }
    let norm2 = u.norm_sqr(g);
    Ok(IdentityCheckResult::upper_bound(rhs, lhs, 1e-9 * norm2.max(1.0)))
}

/// Each μ-orthonormal eigenvector of the symmetrized matrix satisfies the
/// pointwise operator equation: ‖H u_k − λ_k u_k‖_μ small for every k, which
/// pins the similarity between A and S through an independent code path.
pub fn verify_spectrum_similarity(bundle: &GraphBundle<f64>) -> Result<IdentityCheckResult, VerifyError> {
    let spec = operators::spectrum(&operators::assemble(bundle))?;
    let vectors = spec
        .eigenvectors
        .as_ref()
        .expect("dense spectrum carries vectors");
    let g = &bundle.graph;
    let scale = spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        + 1.0;
    let mut worst = 0.0f64;
    for (k, v) in vectors.iter().enumerate() {
        let hv = operators::apply(bundle, v)?;
        let mut err = 0.0;
        for i in 0..g.vertex_count() {
            err += g.mu(i) * (hv.values[i] - v.values[i].scale(spec.eigenvalues[k])).norm_sqr();
        }
        worst = worst.max(err.sqrt() / v.norm(g));
    }
    Ok(IdentityCheckResult {
        lhs: worst,
        rhs: 0.0,
        abs_err: worst,
        rel_err: worst / scale,
        passes: worst <= 1e-10 * scale,
    })
}

// ---------------------------------------------------------------------------
// Randomized instances

/// Seeded generator of random connected weighted magnetic graphs:
/// n ∈ [2, 20], b ∈ (0.1, 10), μ ∈ (0.1, 10), θ uniform, W ∈ (−5, 5).
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
}

impl InstanceGenerator {
    pub fn new(seed: u64) -> Self {
        InstanceGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_bundle(&mut self) -> GraphBundle<f64> {
        loop {
            let n = self.rng.gen_range(2..=20usize);
            let p = self.rng.gen_range(0.25..0.7f64);
            let mut builder = GraphBuilder::<f64>::new();
            for i in 0..n {
                builder.vertex(VertexId::named(format!("v{i}")), self.rng.gen_range(0.1..10.0));
            }
            let mut any_edge = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    if self.rng.gen_bool(p) {
                        any_edge = true;
                        builder.edge_full(
                            VertexId::named(format!("v{i}")),
                            VertexId::named(format!("v{j}")),
                            self.rng.gen_range(0.1..10.0),
                            self.rng
                                .gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                            None,
                        );
                    }
                }
            }
            if !any_edge {
                continue;
            }
            let built = builder.build().expect("structurally valid by construction");
            if !built.graph.is_connected() {
                continue;
            }
            let potential = PotentialAssignment::from_fn(&built.graph, |_| {
                self.rng.gen_range(-5.0..5.0)
            });
            return GraphBundle::new(built.graph, built.theta, potential);
        }
    }

    pub fn complex_vector(&mut self, n: usize) -> MuVector<f64> {
        MuVector::new(
            (0..n)
                .map(|_| Complex::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)))
                .collect(),
        )
    }

    pub fn real_vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.rng.gen_range(-2.0..2.0)).collect()
    }

    /// q ≥ 1 with mild variation.
    pub fn minorant(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| 1.0 + self.rng.gen_range(0.0..9.0)).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

// ---------------------------------------------------------------------------
// Suites

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Lemma21,
    Prop41,
    Cutoffs,
    CoveringBound,
    Operators,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "all" => Some(Suite::All),
            "lemma21" => Some(Suite::Lemma21),
            "prop41" => Some(Suite::Prop41),
            "cutoffs" => Some(Suite::Cutoffs),
            "covering-bound" => Some(Suite::CoveringBound),
            "operators" => Some(Suite::Operators),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub worst_rel_err: f64,
}

impl SuiteSummary {
    fn new(name: &str) -> Self {
        SuiteSummary {
            suite: name.to_string(),
            instances: 0,
            passed: 0,
            failed: 0,
            skipped: 0,
            worst_rel_err: 0.0,
        }
    }

    fn absorb(&mut self, result: &IdentityCheckResult) {
        self.instances += 1;
        if result.passes {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        if result.rel_err.is_finite() {
            self.worst_rel_err = self.worst_rel_err.max(result.rel_err);
        }
    }

    fn skip(&mut self) {
        self.instances += 1;
        self.skipped += 1;
    }
}

/// Runs the requested randomized suites. Each instance draws a fresh bundle
/// from the seeded generator, so results are reproducible per (seed, count).
pub fn run_suite(suite: Suite, seed: u64, instances: usize) -> Result<Vec<SuiteSummary>, VerifyError> {
    let mut out = Vec::new();
    let run = |s: Suite| suite == Suite::All || suite == s;

    if run(Suite::Lemma21) {
        let mut gen = InstanceGenerator::new(seed);
        let mut summary = SuiteSummary::new("lemma21");
        for _ in 0..instances {
            let bundle = gen.next_bundle();
            let f = gen.real_vector(bundle.graph.vertex_count());
            summary.absorb(&verify_lemma21(&bundle, &f)?);
        }
        out.push(summary);
    }
    if run(Suite::Prop41) {
        let mut gen = InstanceGenerator::new(seed.wrapping_add(1));
        let mut summary = SuiteSummary::new("prop41-identity");
        for _ in 0..instances {
            let bundle = gen.next_bundle();
            let u = gen.complex_vector(bundle.graph.vertex_count());
            let phi = gen.real_vector(bundle.graph.vertex_count());
            summary.absorb(&verify_prop41_identity(&bundle, &u, &phi)?);
        }
        out.push(summary);

        let mut gen = InstanceGenerator::new(seed.wrapping_add(2));
        let mut summary = SuiteSummary::new("prop41-bound");
        for _ in 0..instances {
            let mut bundle = gen.next_bundle();
            let n = bundle.graph.vertex_count();
            let q_values = gen.minorant(n);
            // W = -q satisfies the minorant hypothesis with room for noise
            let w: Vec<f64> = q_values.iter().map(|&q| -q).collect();
            bundle.potential = PotentialAssignment::from_values(&bundle.graph, w)?;
            let q = PotentialAssignment::from_values(&bundle.graph, q_values)?;
            let sigma = match metrics::sigma1_default(&bundle.graph) {
                Ok(s) => s,
                Err(_) => {
                    summary.skip();
                    continue;
                }
            };
            let u = gen.complex_vector(n);
            summary.absorb(&verify_prop41_bound(&bundle, &sigma, &q, &u)?);
        }
        out.push(summary);
    }
    if run(Suite::Cutoffs) {
        let mut gen = InstanceGenerator::new(seed.wrapping_add(3));
        let mut summary = SuiteSummary::new("cutoff-profile");
        for i in 0..instances {
            let eps = gen.rng().gen_range(0.01..0.2);
            let rho = gen.rng().gen_range(eps + 0.05..0.49);
            let r = gen.rng().gen_range(1.1..5.0);
            summary.absorb(&verify_cutoff_f(eps, rho, r, 200, seed.wrapping_add(i as u64))?);
        }
        out.push(summary);

        let mut summary = SuiteSummary::new("ball-cutoffs");
        let spec = crate::families::LayeredFamilySpec::bipartite();
        // fixed small radii on progressively larger truncations
        for (n_radius, rows) in [(1.0, 8u32), (2.0, 16), (3.0, 24)] {
            let bundle = spec.generate(rows).expect("valid rows");
            let len = metrics::sigma1_default(&bundle.graph)?;
            summary.absorb(&verify_chi_n(&bundle, &len, &VertexId::grid(1, 1), n_radius)?);
        }
        out.push(summary);
    }
    if run(Suite::CoveringBound) {
        let mut gen = InstanceGenerator::new(seed.wrapping_add(4));
        let mut summary = SuiteSummary::new("covering-bound");
        for _ in 0..instances {
            let bundle = gen.next_bundle();
            let g = &bundle.graph;
            let cover = GoodCovering {
                cells: vec![covering::CoveringCell {
                    vertices: (0..g.vertex_count()).collect(),
                    edges: (0..g.edge_count()).collect(),
                }],
                m: 1,
            };
            let u = gen.complex_vector(g.vertex_count());
            summary.absorb(&verify_covering_bound(&bundle, &cover, &u)?);
        }
        out.push(summary);
    }
    if run(Suite::Operators) {
        let mut gen = InstanceGenerator::new(seed.wrapping_add(5));
        let mut quad = SuiteSummary::new("quadratic-form");
        let mut herm = SuiteSummary::new("hermiticity");
        let mut gauge = SuiteSummary::new("gauge-invariance");
        let mut nonneg = SuiteSummary::new("laplacian-nonnegativity");
        for _ in 0..instances {
            let bundle = gen.next_bundle();
            let n = bundle.graph.vertex_count();
            let u = gen.complex_vector(n);
            let v = gen.complex_vector(n);
            let tau = gen.real_vector(n);
            quad.absorb(&verify_quadratic_form(&bundle, &u)?);
            herm.absorb(&verify_hermiticity(&bundle, &u, &v)?);
            gauge.absorb(&verify_gauge_invariance(&bundle, &tau)?);
            nonneg.absorb(&verify_nonnegativity(&bundle, &u));
        }
        out.push(quad);
        out.push(herm);
        out.push(gauge);
        out.push(nonneg);
    }
    Ok(out)
}
