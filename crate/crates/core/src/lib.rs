//! Numerical toolkit for magnetic Schrödinger operators H = Δ_{b,μ;θ} + W on
//! locally finite weighted graphs: intrinsic metrics, Cauchy-boundary distance
//! bounds, good coverings with effective potentials, and checkers for the
//! essential self-adjointness criteria these objects feed into.
//!
//! The numeric core is generic over the floating-point scalar (see
//! [`scalar::Scalar`]); the type aliases below fix `f64`, which is what the
//! criteria layer and the `sa-graph` CLI use.

pub mod boundary;
pub mod covering;
pub mod criteria;
pub mod families;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod operators;
pub mod scalar;
pub mod verification;

pub use scalar::Scalar;

/// Working-precision weighted graph.
pub type Graph = graph::WeightedGraph<f64>;
/// Working-precision phase assignment.
pub type Phase = graph::PhaseAssignment<f64>;
/// Working-precision potential.
pub type Potential = graph::PotentialAssignment<f64>;
/// Working-precision graph bundle (graph, θ, W).
pub type Bundle = graph::GraphBundle<f64>;
/// Working-precision edge lengths.
pub type Lengths = metrics::EdgeLengthAssignment<f64>;
