//! Cauchy-boundary distance bounds on truncations, certified power-sum tails,
//! and completeness verdicts for the built-in families.
//!
//! The distance from x to the Cauchy boundary, D(x) = inf over completion
//! points of d_σ(x, ·), is never computable from a finite prefix alone; what a
//! truncation supports is a bracket: every escape path leaves through the
//! frontier, and the family certifies how much length remains beyond it.

use serde::Serialize;
use thiserror::Error;

use crate::families::{LayeredFamilySpec, MetricKind};
use crate::graph::{GraphError, VertexId, WeightedGraph};
use crate::metrics::{path_metric_multi, EdgeLengthAssignment};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("divergent tail: exponent {0} is not > 1")]
    DivergentTail(f64),
    #[error("tail index must be positive")]
    ZeroIndex,
}

/// Bracket on D(x), with the assumptions that make it valid recorded.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceBounds<T> {
    pub lower: T,
    pub upper: T,
    pub assumptions: Vec<String>,
}

/// Lower/upper bracket on D(x) computed from distances to the truncation
/// frontier plus family-supplied tail bounds (pass 0 and +∞ when unknown).
///
/// The lower bound is safe for the criteria checkers: it only ever
/// strengthens a 1/(2D²) requirement.
pub fn truncation_distance_bounds<T: Scalar>(
    graph: &WeightedGraph<T>,
    len: &EdgeLengthAssignment<T>,
    x: &VertexId,
    frontier: &[VertexId],
    tail_lb: T,
    tail_ub: T,
) -> Result<DistanceBounds<T>, BoundaryError> {
    let xi = graph.require_idx(x)?;
    let mut sources = Vec::with_capacity(frontier.len());
    for f in frontier {
        sources.push(graph.require_idx(f)?);
    }
    let dist = path_metric_multi(graph, len, &sources);
    let to_frontier = dist[xi];
    Ok(DistanceBounds {
        lower: to_frontier + tail_lb,
        upper: to_frontier + tail_ub,
        assumptions: vec![
            "every Cauchy point is a limit of paths exiting through the frontier".to_string(),
            "tail bounds bracket the boundary distance from every frontier vertex".to_string(),
        ],
    })
}

/// Certified bracket on Σ_{j=n}^∞ (j+1)^{−p} for p > 1, by integral
/// comparison of the decreasing summand:
/// lower = (n+1)^{1−p}/(p−1), upper = n^{1−p}/(p−1) + (n+1)^{−p}.
pub fn tail_power_sum_bounds(p: f64, n: u64) -> Result<(f64, f64), BoundaryError> {
    if !(p > 1.0) {
        return Err(BoundaryError::DivergentTail(p));
    }
    if n == 0 {
        return Err(BoundaryError::ZeroIndex);
    }
    let nf = n as f64;
    let lower = (nf + 1.0).powf(1.0 - p) / (p - 1.0);
    let upper = nf.powf(1.0 - p) / (p - 1.0) + (nf + 1.0).powf(-p);
    Ok((lower, upper))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Completeness {
    Complete,
    Incomplete,
    Inconclusive,
}

/// A verdict plus the certificate that justifies it. `Complete` / `Incomplete`
/// are only ever issued with a certificate from family metadata; numeric
/// evidence alone yields `Inconclusive`.
#[derive(Clone, Debug, Serialize)]
pub struct CompletenessVerdict {
    pub verdict: Completeness,
    pub evidence: String,
    pub certificate: Option<String>,
}

/// Classifies metric completeness of an infinite family from its certified
/// spine-step exponent: step ~ c·j^{−p} gives a convergent geodesic spine
/// (hence a Cauchy boundary point) when p > 1, and a divergent lower bound on
/// every escape path when p ≤ 1 and the escape certificate is present.
pub fn completeness_verdict(family: &LayeredFamilySpec, kind: MetricKind) -> CompletenessVerdict {
    let Some(meta) = family.spine_metadata(kind) else {
        return CompletenessVerdict {
            verdict: Completeness::Inconclusive,
            evidence: "family carries no certified step exponent for this metric".to_string(),
            certificate: None,
        };
    };
    let p = meta.step_exponent;
    if p > 1.0 {
        CompletenessVerdict {
            verdict: Completeness::Incomplete,
            evidence: format!("spine steps ~ j^(-{p}) sum to a finite length (p > 1)"),
            certificate: Some(meta.description),
        }
    } else if meta.escape_certified {
        CompletenessVerdict {
            verdict: Completeness::Complete,
            evidence: format!("every escape path accumulates ~ j^(-{p}) steps, a divergent series (p <= 1)"),
            certificate: Some(meta.description),
        }
    } else {
        CompletenessVerdict {
            verdict: Completeness::Inconclusive,
            evidence: "spine converges slowly but escape paths are not certified".to_string(),
            certificate: None,
        }
    }
}
