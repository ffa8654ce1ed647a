//! Geodesics of the normalized plane.
//!
//! The geodesic equations `ẍ^k + Γ^k_ij ẋ^i ẋ^j = 0` read
//!
//! ```text
//! ẍ1 = 2 x1 ẋ1^2 / (1 + x1^2)
//! ẍ2 = -2 x2 ẋ1^2 / (1 + x1^2) + 4 x1 ẋ1 ẋ2 / (1 + x1^2)
//! ```
//!
//! With `θ = ωt + φ` the general solution with `ẋ1 ≠ 0` is
//! `x1 = tan θ`, `x2 = (a cos 2ωt + b sin 2ωt) sec^2 θ`. Eliminating `t`
//! gives the parabolas `x2 = A (x1^2 - 1) + B x1` with
//! `A = b sin 2φ - a cos 2φ` and `B = 2 (a sin 2φ + b cos 2φ)`.
//! When `ẋ1 = 0` both accelerations vanish and the geodesic is a vertical
//! line `x1 = const`.

use serde::{Deserialize, Serialize};

use super::ChartPoint;
use crate::error::{Error, Result};
use crate::numerics::rk4;

/// Guard on `|cos θ|` near the poles of `tan`.
pub const POLE_EPS: f64 = 1e-9;

/// Integration constants of the parametric solution. `a` and `b` are the real
/// form of the complex pair `c1 e^{2iωt} + c2 e^{-2iωt}`:
/// `a = c1 + c2`, `b = i (c1 - c2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams {
    pub omega: f64,
    pub phase: f64,
    pub a: f64,
    pub b: f64,
}

impl GeodesicParams {
    /// Coefficients `(A, B)` of the unparametrized curve.
    pub fn graph(&self) -> GeodesicCoeffs {
        let (s, c) = (2.0 * self.phase).sin_cos();
        GeodesicCoeffs::Graph {
            a: self.b * s - self.a * c,
            b: 2.0 * (self.a * s + self.b * c),
        }
    }
}

/// An unparametrized geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeodesicCoeffs {
    /// `x2 = a (x1^2 - 1) + b x1`
    Graph { a: f64, b: f64 },
    /// `x1 = const`
    Vertical { x1: f64 },
}

impl GeodesicCoeffs {
    /// `x2` over the given abscissa, for the graph form.
    pub fn eval(&self, x1: f64) -> Option<f64> {
        match *self {
            GeodesicCoeffs::Graph { a, b } => Some(a * (x1 * x1 - 1.0) + b * x1),
            GeodesicCoeffs::Vertical { .. } => None,
        }
    }

    pub fn residual(&self, p: ChartPoint) -> f64 {
        match *self {
            GeodesicCoeffs::Graph { .. } => (self.eval(p.x1).unwrap() - p.x2).abs(),
            GeodesicCoeffs::Vertical { x1 } => (p.x1 - x1).abs(),
        }
    }
}

fn theta_guard(p: &GeodesicParams, t: f64) -> Result<f64> {
    let theta = p.omega * t + p.phase;
    if theta.cos().abs() <= POLE_EPS {
        return Err(Error::AtPole { t });
    }
    Ok(theta)
}

pub fn geodesic_closed_form(p: &GeodesicParams, t: f64) -> Result<ChartPoint> {
    let [x1, x2, _, _] = geodesic_state(p, t)?;
    Ok(ChartPoint { x1, x2 })
}

/// Position and velocity `(x1, x2, ẋ1, ẋ2)` of the closed-form solution.
pub fn geodesic_state(p: &GeodesicParams, t: f64) -> Result<[f64; 4]> {
    let theta = theta_guard(p, t)?;
    let w = p.omega;
    let (tn, sec2) = (theta.tan(), 1.0 / theta.cos().powi(2));
    let (s2, c2) = (2.0 * w * t).sin_cos();
    let h = p.a * c2 + p.b * s2;
    let dh = 2.0 * w * (p.b * c2 - p.a * s2);
    let dsec2 = 2.0 * w * sec2 * tn;
    Ok([tn, h * sec2, w * sec2, dh * sec2 + h * dsec2])
}

/// Second derivative `(ẍ1, ẍ2)` of the closed-form solution, by direct
/// differentiation.
pub fn geodesic_acceleration(p: &GeodesicParams, t: f64) -> Result<[f64; 2]> {
    let theta = theta_guard(p, t)?;
    let w = p.omega;
    let (tn, sec2) = (theta.tan(), 1.0 / theta.cos().powi(2));
    let (s2, c2) = (2.0 * w * t).sin_cos();
    let h = p.a * c2 + p.b * s2;
    let dh = 2.0 * w * (p.b * c2 - p.a * s2);
    let ddh = -4.0 * w * w * h;
    let dsec2 = 2.0 * w * sec2 * tn;
    let ddsec2 = 4.0 * w * w * sec2 * tn * tn + 2.0 * w * w * sec2 * sec2;
    Ok([
        2.0 * w * w * sec2 * tn,
        ddh * sec2 + 2.0 * dh * dsec2 + h * ddsec2,
    ])
}

/// Right-hand side of the geodesic system in the state `(x1, x2, v1, v2)`.
pub fn geodesic_ode_rhs(state: &[f64; 4]) -> [f64; 4] {
    let [x1, x2, v1, v2] = *state;
    let w = 1.0 + x1 * x1;
    [
        v1,
        v2,
        2.0 * x1 * v1 * v1 / w,
        -2.0 * x2 * v1 * v1 / w + 4.0 * x1 * v1 * v2 / w,
    ]
}

/// RK4 trajectory of the geodesic system.
pub fn integrate_geodesic(
    state: [f64; 4],
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec<(f64, [f64; 4])>> {
    rk4(|y: &[f64; 4]| geodesic_ode_rhs(y), state, t0, t1, steps)
}

const SAME_EPS: f64 = 1e-12;

/// The geodesic through two distinct points.
pub fn geodesic_through(p: ChartPoint, q: ChartPoint) -> Result<GeodesicCoeffs> {
    let scale = |u: f64, v: f64| u.abs().max(v.abs()).max(1.0);
    let dx = (p.x1 - q.x1).abs();
    if dx <= SAME_EPS * scale(p.x1, q.x1) {
        if (p.x2 - q.x2).abs() <= SAME_EPS * scale(p.x2, q.x2) {
            return Err(Error::SamePoint);
        }
        return Ok(GeodesicCoeffs::Vertical {
            x1: 0.5 * (p.x1 + q.x1),
        });
    }
    // A (x^2 - 1) + B x = y at both points
    let (m11, m12) = (p.x1 * p.x1 - 1.0, p.x1);
    let (m21, m22) = (q.x1 * q.x1 - 1.0, q.x1);
    let det = m11 * m22 - m12 * m21;
    if (1.0 + p.x1 * q.x1).abs() <= SAME_EPS * scale(p.x1 * q.x1, 1.0) {
        return Err(Error::ConjugateAbscissas { p: p.x1, q: q.x1 });
    }
    Ok(GeodesicCoeffs::Graph {
        a: (p.x2 * m22 - m12 * q.x2) / det,
        b: (m11 * q.x2 - p.x2 * m21) / det,
    })
}
