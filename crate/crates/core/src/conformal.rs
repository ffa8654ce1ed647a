//! Conformal model of the unit sphere `x0^2 - x1^2 = 1` on the plane
//! `x0 = 0`, by stereographic projection from the pole `N = (1, 0, 0)`.
//!
//! ```text
//! S:     x = x1 / (1 - x0),  y = x2 / (1 - x0)
//! S^-1:  x0 = -(1 + x^2) / (1 - x^2),  x1 = 2x / (1 - x^2),  x2 = 2y / (1 - x^2)
//! ```
//!
//! The component `x0 > 0` lands in `|x| > 1`, the component `x0 < 0` in the
//! strip `|x| < 1`. The whole line `x0 = 1, x1 = 0` through the pole goes to
//! the ideal elements of the compactified plane.
//!
//! In adapted sphere coordinates `φ = ln(ε (x - 1)/(x + 1))` and
//! `u = -2y / (1 - x)^2`, so the sphere metric `-dφ^2` equals
//! `4 / (x^2 - 1)^2` times the plane metric `-dx^2`. Fibers `u = c` become
//! the parabolas `y = -c/2 (x - 1)^2`.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::bundle::{self, SPHERE_TOL};
use crate::error::{Error, Result};

/// Guard on `|x^2 - 1|` and `|1 - x0|`.
pub const BRANCH_EPS: f64 = 1e-12;

/// A point of the compactified plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanePoint {
    Finite {
        x: f64,
        y: f64,
    },
    /// The point at infinity together with the ideal line through it.
    /// `line` carries the `x2` coordinate of the preimage on the pole line.
    Ideal {
        line: Option<f64>,
    },
}

impl PlanePoint {
    pub fn finite(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(PlanePoint::Finite { x, y })
        } else {
            Err(Error::NonFinite("PlanePoint"))
        }
    }

    pub fn coords(&self) -> Result<(f64, f64)> {
        match *self {
            PlanePoint::Finite { x, y } => Ok((x, y)),
            PlanePoint::Ideal { .. } => Err(Error::IdealPoint),
        }
    }
}

/// Adapted coordinates on the sphere recovered from a plane point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereAdapted {
    pub eps: f64,
    pub u: f64,
    pub phi: f64,
}

pub fn stereo_to_plane(s: AlgebraElement) -> Result<PlanePoint> {
    let n = s.norm_sq();
    if (n - 1.0).abs() > SPHERE_TOL * s.x0().abs().max(1.0).powi(2) {
        return Err(Error::NotOnSphere { norm_sq: n });
    }
    let d = 1.0 - s.x0();
    if d.abs() <= BRANCH_EPS {
        return Ok(PlanePoint::Ideal { line: Some(s.x2()) });
    }
    Ok(PlanePoint::Finite {
        x: s.x1() / d,
        y: s.x2() / d,
    })
}

fn branch_guard(x: f64) -> Result<f64> {
    let d = 1.0 - x * x;
    if d.abs() <= BRANCH_EPS {
        return Err(Error::OnBranchLine { x });
    }
    Ok(d)
}

/// Inverse stereographic map. Ideal elements go back to the pole line
/// `(1, 0, t)`.
pub fn stereo_from_plane(p: &PlanePoint) -> Result<AlgebraElement> {
    match *p {
        PlanePoint::Ideal { line } => Ok(AlgebraElement::raw(1.0, 0.0, line.unwrap_or(0.0))),
        PlanePoint::Finite { x, y } => {
            let d = branch_guard(x)?;
            Ok(AlgebraElement::raw(
                -(1.0 + x * x) / d,
                2.0 * x / d,
                2.0 * y / d,
            ))
        }
    }
}

pub fn adapted_from_plane(p: &PlanePoint) -> Result<SphereAdapted> {
    let (x, y) = p.coords()?;
    branch_guard(x)?;
    let r = (x - 1.0) / (x + 1.0);
    let eps = if r > 0.0 {
        1.0
    } else if r < 0.0 {
        -1.0
    } else {
        return Err(Error::BranchDomain);
    };
    Ok(SphereAdapted {
        eps,
        phi: (eps * r).ln(),
        u: -2.0 * y / ((1.0 - x) * (1.0 - x)),
    })
}

/// The bundle map `p = π ∘ S^-1`, `u = -2y / (1 - x)^2`. Defined on the
/// whole plane except `x = 1`.
pub fn bundle_map_p(p: &PlanePoint) -> Result<f64> {
    let (x, y) = p.coords()?;
    let d = (1.0 - x) * (1.0 - x);
    if d <= BRANCH_EPS {
        return Err(Error::OnBranchLine { x });
    }
    Ok(-2.0 * y / d)
}

/// `4 / (x^2 - 1)^2`.
pub fn conformal_factor(x: f64) -> Result<f64> {
    let d = branch_guard(x)?;
    Ok(4.0 / (d * d))
}

/// Image `y = -c/2 (x - 1)^2` of the fiber `u = c`.
pub fn fiber_image(c: f64, x: f64) -> f64 {
    -0.5 * c * (x - 1.0) * (x - 1.0)
}

/// Squared length `-(∫ sqrt(factor) dx)^2` of the curve between abscissas `a`
/// and `b` in the induced plane metric, by Simpson quadrature. Both ends must
/// lie in one branch component.
pub fn segment_length_sq(a: f64, b: f64, intervals: usize) -> Result<f64> {
    let (ra, rb) = (a * a - 1.0, b * b - 1.0);
    branch_guard(a)?;
    branch_guard(b)?;
    if ra.signum() != rb.signum() || (a.abs() > 1.0 && a.signum() != b.signum()) {
        return Err(Error::OnBranchLine {
            x: if ra.abs() < rb.abs() { a } else { b },
        });
    }
    let len = crate::numerics::simpson(|x| 2.0 / (x * x - 1.0).abs(), a, b, intervals);
    Ok(-len * len)
}

/// Convenience: the sphere point's adapted data through the algebra route.
pub fn sphere_adapted(s: AlgebraElement) -> Result<SphereAdapted> {
    let p = bundle::sphere_project(s)?;
    Ok(SphereAdapted {
        eps: p.eps,
        u: p.u,
        phi: p.phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{project_base, sphere_embed, sphere_project, SpherePoint};
    use crate::numerics::central_diff_scalar;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn el(x0: f64, x1: f64, x2: f64) -> AlgebraElement {
        AlgebraElement::new(x0, x1, x2).unwrap()
    }

    fn pt(x: f64, y: f64) -> PlanePoint {
        PlanePoint::finite(x, y).unwrap()
    }

    #[test]
    fn forward_map() {
        assert_eq!(stereo_to_plane(-AlgebraElement::ONE).unwrap(), pt(0.0, 0.0));
        let p = stereo_to_plane(el(1.25, 0.75, 2.0)).unwrap();
        assert_eq!(p, pt(-3.0, -8.0));
        assert_eq!(
            stereo_to_plane(el(1.0, 0.0, 5.0)).unwrap(),
            PlanePoint::Ideal { line: Some(5.0) }
        );
        assert!(matches!(
            stereo_to_plane(el(0.0, 0.0, 1.0)),
            Err(Error::NotOnSphere { .. })
        ));
    }

    #[test]
    fn inverse_map() {
        assert_eq!(
            stereo_from_plane(&pt(0.0, 0.0)).unwrap(),
            -AlgebraElement::ONE
        );
        let s = stereo_from_plane(&pt(2.0, 1.0)).unwrap();
        assert!(s.dist_max(el(5.0 / 3.0, -4.0 / 3.0, -2.0 / 3.0)) < 1e-15);
        assert!((s.norm_sq() - 1.0).abs() < 1e-15);
        assert!(matches!(
            stereo_from_plane(&pt(1.0, 0.0)),
            Err(Error::OnBranchLine { .. })
        ));
        assert!(matches!(
            stereo_from_plane(&pt(-1.0, 3.0)),
            Err(Error::OnBranchLine { .. })
        ));
        let s = stereo_from_plane(&PlanePoint::Ideal { line: Some(5.0) }).unwrap();
        assert_eq!(s, el(1.0, 0.0, 5.0));
    }

    #[test]
    fn adapted_examples() {
        let a = adapted_from_plane(&pt(-3.0, -8.0)).unwrap();
        let oracle = sphere_project(stereo_from_plane(&pt(-3.0, -8.0)).unwrap()).unwrap();
        assert_eq!(a.eps, 1.0);
        assert_relative_eq!(a.u, 1.0, epsilon = 1e-15);
        assert_relative_eq!(a.phi, LN_2, epsilon = 1e-15);
        assert_eq!(oracle.eps, a.eps);
        assert_relative_eq!(oracle.u, a.u, epsilon = 1e-14);
        assert_relative_eq!(oracle.phi, a.phi, epsilon = 1e-14);

        let a = adapted_from_plane(&pt(0.0, 0.0)).unwrap();
        assert_eq!((a.eps, a.u, a.phi), (-1.0, 0.0, 0.0));
        assert_eq!(adapted_from_plane(&pt(3.0, -4.0)).unwrap().u, 2.0);
        assert!(matches!(
            adapted_from_plane(&pt(1.0, 0.0)),
            Err(Error::OnBranchLine { .. })
        ));
        assert_eq!(
            adapted_from_plane(&PlanePoint::Ideal { line: None }),
            Err(Error::IdealPoint)
        );
    }

    #[test]
    fn bundle_map() {
        assert_eq!(bundle_map_p(&pt(0.0, 0.0)).unwrap(), 0.0);
        assert_eq!(bundle_map_p(&pt(3.0, -4.0)).unwrap(), 2.0);
        let oracle = project_base(stereo_from_plane(&pt(3.0, -4.0)).unwrap()).unwrap();
        assert_relative_eq!(oracle, 2.0, epsilon = 1e-14);
        // x = -1 is outside the stereographic domain but inside the domain of p
        assert_eq!(bundle_map_p(&pt(-1.0, 2.0)).unwrap(), -1.0);
        let near = project_base(stereo_from_plane(&pt(-1.0 + 1e-7, 2.0)).unwrap()).unwrap();
        assert!((near + 1.0).abs() < 1e-6);
        assert!(matches!(
            bundle_map_p(&pt(1.0, 2.0)),
            Err(Error::OnBranchLine { .. })
        ));
    }

    #[test]
    fn factor_values() {
        assert_eq!(conformal_factor(0.0).unwrap(), 4.0);
        assert_relative_eq!(conformal_factor(3f64.sqrt()).unwrap(), 1.0, epsilon = 1e-14);
        assert!(conformal_factor(-1.0).is_err());
    }

    #[test]
    fn fiber_values() {
        assert_eq!(fiber_image(0.0, 17.0), 0.0);
        assert_eq!(fiber_image(2.0, 3.0), -4.0);
        assert_eq!(bundle_map_p(&pt(3.0, fiber_image(2.0, 3.0))).unwrap(), 2.0);
    }

    #[test]
    fn fiber_segment_length_matches_sphere() {
        // Fiber u = 1.5 between x = 2 and x = 5, on the component x0 > 0.
        let c = 1.5;
        let phi_of = |x: f64| {
            sphere_project(stereo_from_plane(&pt(x, fiber_image(c, x))).unwrap())
                .unwrap()
                .phi
        };
        let dphi = phi_of(5.0) - phi_of(2.0);
        let plane = segment_length_sq(2.0, 5.0, 2000).unwrap();
        assert!(
            (plane + dphi * dphi).abs() <= 1e-6,
            "{plane} vs {}",
            -dphi * dphi
        );
        // and inside the strip
        let dphi = phi_of(0.5) - phi_of(-0.3);
        let plane = segment_length_sq(-0.3, 0.5, 2000).unwrap();
        assert!((plane + dphi * dphi).abs() <= 1e-6);
        assert!(segment_length_sq(0.5, 2.0, 100).is_err());
        assert!(segment_length_sq(-3.0, 2.0, 100).is_err());
    }

    proptest! {
        #[test]
        fn plane_round_trip(x in -10.0..10.0f64, y in -10.0..10.0f64) {
            prop_assume!((x * x - 1.0).abs() > 1e-3);
            let s = stereo_from_plane(&pt(x, y)).unwrap();
            prop_assert!((s.norm_sq() - 1.0).abs() <= 1e-12 * s.x0().powi(2).max(1.0));
            let (xb, yb) = stereo_to_plane(s).unwrap().coords().unwrap();
            let scale = x.abs().max(y.abs()).max(1.0);
            prop_assert!((xb - x).abs().max((yb - y).abs()) <= 1e-10 * scale);
        }

        #[test]
        fn sphere_round_trip(eps in any::<bool>(), u in -5.0..5.0f64, phi in -3.0..3.0f64) {
            let eps = if eps { 1.0 } else { -1.0 };
            prop_assume!(eps < 0.0 || phi.abs() > 1e-2);
            let s = sphere_embed(&SpherePoint { eps, u, phi });
            let p = stereo_to_plane(s).unwrap();
            let (x, _) = p.coords().unwrap();
            prop_assert_eq!(x.abs() > 1.0, eps > 0.0);
            let back = stereo_from_plane(&p).unwrap();
            prop_assert!(back.dist_max(s) <= 1e-10 * s.max_abs().max(1.0));
        }

        #[test]
        fn adapted_matches_sphere_route(x in -10.0..10.0f64, y in -10.0..10.0f64) {
            prop_assume!((x * x - 1.0).abs() > 1e-3);
            let a = adapted_from_plane(&pt(x, y)).unwrap();
            let b = sphere_adapted(stereo_from_plane(&pt(x, y)).unwrap()).unwrap();
            prop_assert_eq!(a.eps, b.eps);
            prop_assert!((a.phi - b.phi).abs() <= 1e-9);
            prop_assert!((a.u - b.u).abs() <= 1e-9 * a.u.abs().max(1.0));
            let pu = bundle_map_p(&pt(x, y)).unwrap();
            prop_assert!((pu - a.u).abs() <= 1e-12 * pu.abs().max(1.0));
        }

        #[test]
        fn conformality(x in -10.0..10.0f64, y in -10.0..10.0f64) {
            prop_assume!((x * x - 1.0).abs() > 0.1);
            let phi = |t: f64| sphere_adapted(stereo_from_plane(&pt(t, y)).unwrap()).unwrap().phi;
            let dphi = central_diff_scalar(phi, x, 1e-5);
            let f = conformal_factor(x).unwrap();
            prop_assert!((dphi * dphi - f).abs() <= 1e-6 * f.max(1.0));
        }

        #[test]
        fn fibers_are_parabolas(eps in any::<bool>(), c in -5.0..5.0f64, phi in -3.0..3.0f64) {
            let eps = if eps { 1.0 } else { -1.0 };
            prop_assume!(eps < 0.0 || phi.abs() > 1e-2);
            let s = sphere_embed(&SpherePoint { eps, u: c, phi });
            let (x, y) = stereo_to_plane(s).unwrap().coords().unwrap();
            prop_assert!((y - fiber_image(c, x)).abs() <= 1e-9 * y.abs().max(1.0));
        }
    }
}
