//! Principal bundle of the invertible elements over the real line, with
//! structure group the invertible double numbers `a0 + a1 e1`.
//!
//! Adapted coordinates `(u, λ, φ)` split the base coordinate `u` from the
//! fiber coordinates:
//!
//! ```text
//! |x|^2 > 0:  x = (λ cosh φ, λ sinh φ, u λ e^φ),  sign λ = sign x0
//! |x|^2 < 0:  x = (λ sinh φ, λ cosh φ, u λ e^φ),  sign λ = sign x1
//! ```
//!
//! In both charts `x0 + x1 = λ e^φ`, so the projection is
//! `π(x) = x2 / (x0 + x1)` and the fibers are the planes
//! `u (x0 + x1) = x2`. Left multiplication by `ρ (cosh ψ + sinh ψ e1)` acts
//! as `(u, λ, φ) ↦ (u, λρ, φ + ψ)`, leaving `u` fixed.
//!
//! The unit sphere `x0^2 - x1^2 = 1` is the sub-bundle with `λ = ε = ±1`.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};

/// Cutoff for `|x0 + x1|` and `||x|^2|` near the null planes.
pub const NULL_EPS: f64 = 1e-12;
/// Tolerance on `|x|^2 = 1` for sphere membership.
pub const SPHERE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// `|x|^2 > 0`
    Timelike,
    /// `|x|^2 < 0`
    Spacelike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptedCoords {
    pub chart: Chart,
    pub u: f64,
    pub lambda: f64,
    pub phi: f64,
}

/// `π(x) = x2 / (x0 + x1)`.
pub fn project_base(x: AlgebraElement) -> Result<f64> {
    let s = x.x0() + x.x1();
    if s.abs() <= NULL_EPS {
        return Err(Error::OnNullPlane);
    }
    Ok(x.x2() / s)
}

/// Membership in the fiber plane `u (x0 + x1) = x2`, with tolerance
/// `tol * (1 + |x2|)`.
pub fn fiber_contains(u: f64, x: AlgebraElement, tol: f64) -> bool {
    (u * (x.x0() + x.x1()) - x.x2()).abs() <= tol * (1.0 + x.x2().abs())
}

pub fn to_adapted(x: AlgebraElement) -> Result<AdaptedCoords> {
    let n = x.norm_sq();
    if n.abs() <= NULL_EPS {
        return Err(Error::NullNorm { norm_sq: n });
    }
    let (chart, lambda, phi) = if n > 0.0 {
        let lambda = x.x0().signum() * n.sqrt();
        (Chart::Timelike, lambda, (x.x1() / x.x0()).atanh())
    } else {
        let lambda = x.x1().signum() * (-n).sqrt();
        (Chart::Spacelike, lambda, (x.x0() / x.x1()).atanh())
    };
    Ok(AdaptedCoords {
        chart,
        u: x.x2() / (lambda * phi.exp()),
        lambda,
        phi,
    })
}

pub fn from_adapted(c: &AdaptedCoords) -> AlgebraElement {
    let (ch, sh) = (c.phi.cosh(), c.phi.sinh());
    let x2 = c.u * c.lambda * c.phi.exp();
    match c.chart {
        Chart::Timelike => AlgebraElement::raw(c.lambda * ch, c.lambda * sh, x2),
        Chart::Spacelike => AlgebraElement::raw(c.lambda * sh, c.lambda * ch, x2),
    }
}

/// Action of the structure-group element with adapted data `(0, ρ, ψ)`.
pub fn structure_action(rho: f64, psi: f64, c: &AdaptedCoords) -> AdaptedCoords {
    AdaptedCoords {
        lambda: c.lambda * rho,
        phi: c.phi + psi,
        ..*c
    }
}

/// The structure-group element `ρ (cosh ψ + sinh ψ e1)`.
pub fn structure_element(rho: f64, psi: f64) -> AlgebraElement {
    AlgebraElement::raw(rho * psi.cosh(), rho * psi.sinh(), 0.0)
}

/// A point `ε (cosh φ, sinh φ, u e^φ)` of the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    /// Component, `+1` for `x0 > 0` and `-1` for `x0 < 0`.
    pub eps: f64,
    pub u: f64,
    pub phi: f64,
}

pub fn sphere_embed(p: &SpherePoint) -> AlgebraElement {
    AlgebraElement::raw(p.phi.cosh(), p.phi.sinh(), p.u * p.phi.exp()).scale(p.eps)
}

fn check_sphere(x: AlgebraElement) -> Result<()> {
    let n = x.norm_sq();
    if (n - 1.0).abs() > SPHERE_TOL * x.x0().abs().max(1.0).powi(2) {
        return Err(Error::NotOnSphere { norm_sq: n });
    }
    Ok(())
}

pub fn sphere_project(x: AlgebraElement) -> Result<SpherePoint> {
    check_sphere(x)?;
    let eps = x.x0().signum();
    let phi = (x.x1() / x.x0()).atanh();
    Ok(SpherePoint {
        eps,
        u: x.x2() / (eps * phi.exp()),
        phi,
    })
}

/// `x ↦ e1 x`, exchanging the spheres of norm square `+1` and `-1`.
pub fn map_between_spheres(x: AlgebraElement) -> Result<AlgebraElement> {
    let n = x.norm_sq();
    if (n.abs() - 1.0).abs() > SPHERE_TOL * x.x0().abs().max(x.x1().abs()).max(1.0).powi(2) {
        return Err(Error::NotOnSphere { norm_sq: n });
    }
    Ok(AlgebraElement::E1 * x)
}

/// Samples the straight geodesic `(a0 t + b0, a1 t + b1, f(t))` of the
/// degenerate space; the `x2` profile is arbitrary.
pub fn sample_geodesic_g<F>(
    a0: f64,
    b0: f64,
    a1: f64,
    b1: f64,
    f: F,
    ts: &[f64],
) -> Vec<AlgebraElement>
where
    F: Fn(f64) -> f64,
{
    ts.iter()
        .map(|&t| AlgebraElement::raw(a0 * t + b0, a1 * t + b1, f(t)))
        .collect()
}
