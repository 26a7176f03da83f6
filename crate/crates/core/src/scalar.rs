//! Scalar abstraction for the numeric core.
//!
//! All graph, metric, and operator computations are written against [`Scalar`]
//! so that the same code runs in `f32` or `f64`. The crate root exports `f64`
//! type aliases, which is what the checkers and the CLI use.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar usable throughout the numeric core.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum<Self> + Debug + Display + Default + Send + Sync + 'static
{
    /// Shorthand for converting an `f64` literal (tolerances, closed-form
    /// constants) into the working scalar type.
    fn real(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant must be representable")
    }

    /// π in the working precision.
    fn pi() -> Self {
        Self::real(std::f64::consts::PI)
    }

    /// 2π in the working precision.
    fn two_pi() -> Self {
        Self::real(std::f64::consts::TAU)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Reduces an angle to the interval (−π, π], identifying −π with π.
pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    if !theta.is_finite() {
        return theta;
    }
    let two_pi = T::two_pi();
    let mut t = theta % two_pi;
    if t > T::pi() {
        t -= two_pi;
    } else if t <= -T::pi() {
        t += two_pi;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        for &(input, expected) in &[
            (0.0_f64, 0.0),
            (std::f64::consts::PI, std::f64::consts::PI),
            (-std::f64::consts::PI, std::f64::consts::PI),
            (3.0 * std::f64::consts::PI, std::f64::consts::PI),
            (std::f64::consts::TAU, 0.0),
            (-0.5, -0.5),
        ] {
            let w = wrap_angle(input);
            assert!(
                (w - expected).abs() < 1e-12,
                "wrap({input}) = {w}, expected {expected}"
            );
            assert!(w > -std::f64::consts::PI && w <= std::f64::consts::PI);
        }
    }

    #[test]
    fn wrap_angle_f32() {
        let w = wrap_angle(7.0_f32);
        assert!(w > -std::f32::consts::PI && w <= std::f32::consts::PI);
        assert!((w - (7.0 - std::f32::consts::TAU)).abs() < 1e-6);
    }
}
