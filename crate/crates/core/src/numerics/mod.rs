//! Shared numerical utilities: central differences, fixed-step RK4, the
//! tolerance policy and a reproducible sampler for the verification suites.

mod diff;
mod ode;
mod sampler;
mod tolerances;

pub use diff::{central_diff, central_diff_scalar, simpson};
pub use ode::{rk4, rk4_step};
pub use sampler::Sampler;
pub use tolerances::Tolerances;

/// `|a - b|_inf / max(1, |a|_inf, |b|_inf)`.
pub fn scaled_diff<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    let mut num = 0.0f64;
    let mut scale = 1.0f64;
    for (x, y) in a.iter().zip(b) {
        num = num.max((x - y).abs());
        scale = scale.max(x.abs()).max(y.abs());
    }
    num / scale
}
