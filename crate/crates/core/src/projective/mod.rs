//! Projective model of the unit sphere.
//!
//! In `P^3` with homogeneous coordinates `(y0 : y1 : y2 : y3)` the sphere
//! becomes the hyperquadric `y0^2 - y1^2 - y3^2 = 0`, a cone with vertex
//! `E2 = (0:0:1:0)`. Stereographic projection from the pole `N = (1:0:0:1)`
//! identifies the quadric with the plane `α: y0 = 0, y3 ≠ 0`, carrying
//! Cartesian coordinates `x1 = y1/y3`, `x2 = y2/y3`.
//!
//! Normalizing the quadric by lines through the fixed center `E0 = (1:0:0:0)`
//! and standardizing the normalization point to `(X, X) = -1` induces on `α`
//! the degenerate metric `g11 = 4 / (1 + x1^2)^2` and a torsion-free
//! equiaffine connection; see [`connection`]. Its geodesics are the parabolas
//! `x2 = A (x1^2 - 1) + B x1` together with the vertical lines; see
//! [`geodesic`].

pub mod connection;
pub mod geodesic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use connection::{
    christoffel, covariant_residuals, covariant_residuals_with, curvature, metric_fd, metric_g11,
    ricci_tensor, riemann_tensor, riemann_tensor_fd, Connection, ConnectionData,
    CovariantResiduals, Curvature, Gammas, NordenConnection, PerturbedConnection, Riemann,
};
pub use geodesic::{
    geodesic_acceleration, geodesic_closed_form, geodesic_ode_rhs, geodesic_state,
    geodesic_through, integrate_geodesic, GeodesicCoeffs, GeodesicParams,
};

/// A point of `P^3`, defined up to a nonzero factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct HomogeneousPoint([f64; 4]);

impl HomogeneousPoint {
    pub const E0: Self = Self([1.0, 0.0, 0.0, 0.0]);
    pub const E1: Self = Self([0.0, 1.0, 0.0, 0.0]);
    pub const E2: Self = Self([0.0, 0.0, 1.0, 0.0]);
    pub const E3: Self = Self([0.0, 0.0, 0.0, 1.0]);
    /// Pole of the stereographic projection.
    pub const N: Self = Self([1.0, 0.0, 0.0, 1.0]);
    pub const N_PRIME: Self = Self([1.0, 0.0, 0.0, -1.0]);

    pub fn new(y: [f64; 4]) -> Result<Self> {
        if y.iter().any(|v| !v.is_finite()) || y.iter().all(|v| *v == 0.0) {
            return Err(Error::NonFinite("HomogeneousPoint"));
        }
        Ok(Self(y))
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    /// Representative with the largest-magnitude coordinate equal to `1`
    /// (first one on ties).
    pub fn normalized(&self) -> [f64; 4] {
        let pivot = self
            .0
            .iter()
            .copied()
            .fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        self.0.map(|v| v / pivot)
    }

    /// Scale-invariant distance between the rays of `self` and `other`:
    /// `min over ± of |p/|p| ∓ q/|q||_inf`.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        let unit = |y: [f64; 4]| {
            let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.map(|v| v / n)
        };
        let (p, q) = (unit(self.0), unit(other.0));
        let d = |s: f64| (0..4).map(|i| (p[i] - s * q[i]).abs()).fold(0.0, f64::max);
        d(1.0).min(d(-1.0))
    }
}

impl TryFrom<[f64; 4]> for HomogeneousPoint {
    type Error = Error;

    fn try_from(y: [f64; 4]) -> Result<Self> {
        Self::new(y)
    }
}

impl From<HomogeneousPoint> for [f64; 4] {
    fn from(p: HomogeneousPoint) -> Self {
        p.0
    }
}

/// Cartesian point `(x1, x2)` of the plane `α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub x1: f64,
    pub x2: f64,
}

impl ChartPoint {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if x1.is_finite() && x2.is_finite() {
            Ok(Self { x1, x2 })
        } else {
            Err(Error::NonFinite("ChartPoint"))
        }
    }
}

/// Polar form of the quadric, `B(p, q) = p0 q0 - p1 q1 - p3 q3`. The `y2`
/// coordinate does not enter.
pub fn quadric_form(p: &[f64; 4], q: &[f64; 4]) -> f64 {
    p[0] * q[0] - p[1] * q[1] - p[3] * q[3]
}

/// `|Q(y)| / max(y_i^2, 1)`.
pub fn quadric_residual(p: &HomogeneousPoint) -> f64 {
    let y = p.0;
    let scale = y.iter().map(|v| v * v).fold(1.0, f64::max);
    quadric_form(&y, &y).abs() / scale
}

pub fn on_quadric(p: &HomogeneousPoint, tol: f64) -> bool {
    quadric_residual(p) <= tol
}

/// Stereographic image `(-1 - x1^2 : 2 x1 : 2 x2 : 1 - x1^2)` of the chart
/// point on the quadric.
pub fn proj_stereo(c: ChartPoint) -> HomogeneousPoint {
    let s = c.x1 * c.x1;
    HomogeneousPoint([-1.0 - s, 2.0 * c.x1, 2.0 * c.x2, 1.0 - s])
}

/// Intersection `(0 : 2 x1 : 2 x2 : 1 - x1^2)` of the line through `E0` and
/// the quadric point with the plane `α`.
pub fn normalization_point(c: ChartPoint) -> HomogeneousPoint {
    HomogeneousPoint([0.0, 2.0 * c.x1, 2.0 * c.x2, 1.0 - c.x1 * c.x1])
}

/// Normalization point scaled by `1 / (1 + x1^2)` so that `B(X, X) = -1`.
pub fn weierstrass(c: ChartPoint) -> HomogeneousPoint {
    let k = 1.0 / (1.0 + c.x1 * c.x1);
    HomogeneousPoint(normalization_point(c).0.map(|v| v * k))
}

/// Infinitesimal quadric-preserving operators, as coefficient vectors over
/// `(∂0, ∂1, ∂2, ∂3)`:
/// `L1 = y0 ∂1 + y1 ∂0`, `L2 = y0 ∂3 + y3 ∂0`, `L3 = y1 ∂3 - y3 ∂1`.
pub fn killing_vector(i: usize, p: &HomogeneousPoint) -> [f64; 4] {
    let [y0, y1, _, y3] = p.0;
    match i {
        1 => [y1, y0, 0.0, 0.0],
        2 => [y3, 0.0, 0.0, y0],
        3 => [0.0, -y3, 0.0, y1],
        _ => panic!("operator index must be 1, 2 or 3, got {i}"),
    }
}

/// `∇Q · L` for `Q = y0^2 - y1^2 - y3^2`.
pub fn quadric_gradient_dot(p: &HomogeneousPoint, v: &[f64; 4]) -> f64 {
    let y = p.0;
    2.0 * y[0] * v[0] - 2.0 * y[1] * v[1] - 2.0 * y[3] * v[3]
}

/// Image `x2 = -v/2 (x1 + 1)^2` of the fiber `(y0 - y1) v = y2`.
pub fn projective_fiber_image(v: f64, x1: f64) -> f64 {
    -0.5 * v * (x1 + 1.0) * (x1 + 1.0)
}

/// `(y0 - y1) v - y2`.
pub fn fiber_equation(v: f64, p: &HomogeneousPoint) -> f64 {
    let y = p.0;
    (y[0] - y[1]) * v - y[2]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::central_diff;
    use proptest::prelude::*;

    fn cp(x1: f64, x2: f64) -> ChartPoint {
        ChartPoint::new(x1, x2).unwrap()
    }

    fn hp(y: [f64; 4]) -> HomogeneousPoint {
        HomogeneousPoint::new(y).unwrap()
    }

    // Second intersection of the line N + s U, U = (0, x1, x2, 1), with the
    // quadric: s^2 - x1^2 - (s + 1)^2 = 0 gives s = -(1 + x1^2)/2.
    fn line_intersection(x1: f64, x2: f64) -> [f64; 4] {
        let s = -(1.0 + x1 * x1) / 2.0;
        [s, x1, x2, s + 1.0]
    }

    #[test]
    fn quadric_membership() {
        assert!(on_quadric(&HomogeneousPoint::N, 1e-12));
        assert!(on_quadric(&HomogeneousPoint::N_PRIME, 1e-12));
        assert!(on_quadric(&HomogeneousPoint::E2, 1e-12));
        assert!(!on_quadric(&hp([1.0, 1.0, 0.0, 1.0]), 1e-12));
        assert!(HomogeneousPoint::new([0.0; 4]).is_err());
    }

    #[test]
    fn stereographic_images() {
        let p = proj_stereo(cp(0.0, 0.0));
        assert_eq!(p.coords(), [-1.0, 0.0, 0.0, 1.0]);
        assert!(p.projective_distance(&hp(line_intersection(0.0, 0.0))) < 1e-15);
        let p = proj_stereo(cp(2.0, 1.0));
        assert_eq!(p.coords(), [-5.0, 4.0, 2.0, -3.0]);
        assert!(p.projective_distance(&hp(line_intersection(2.0, 1.0))) < 1e-15);
        assert_eq!(quadric_form(&p.coords(), &p.coords()), 0.0);
        assert_eq!(p.normalized(), [1.0, -0.8, -0.4, 0.6]);
        let p = proj_stereo(cp(1.0, 5.0));
        assert_eq!(p.coords(), [-2.0, 2.0, 10.0, 0.0]);
    }

    #[test]
    fn normalization_points() {
        assert_eq!(
            normalization_point(cp(0.0, 0.0)).coords(),
            [0.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(
            normalization_point(cp(1.0, 1.0)).coords(),
            [0.0, 2.0, 2.0, 0.0]
        );
        let w = weierstrass(cp(0.0, 0.0)).coords();
        assert_eq!(w, [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(quadric_form(&w, &w), -1.0);
        let w = weierstrass(cp(1.0, 1.0)).coords();
        assert_eq!(w, [0.0, 1.0, 1.0, 0.0]);
        assert_eq!(quadric_form(&w, &w), -1.0);
        // (X, X) = -(1 + x1^2)^2
        let x = normalization_point(cp(2.0, -3.0)).coords();
        assert_eq!(quadric_form(&x, &x), -25.0);
    }

    #[test]
    fn killing_vectors() {
        assert_eq!(
            killing_vector(3, &HomogeneousPoint::N),
            [0.0, -1.0, 0.0, 0.0]
        );
        assert_eq!(killing_vector(1, &HomogeneousPoint::E2), [0.0; 4]);
        assert_eq!(
            killing_vector(2, &HomogeneousPoint::N),
            [1.0, 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn fiber_images() {
        assert_eq!(projective_fiber_image(0.0, 3.3), 0.0);
        assert_eq!(projective_fiber_image(2.0, 1.0), -4.0);
    }

    // Rank of the 3x4 matrix [E0; X; X1] via its 3x3 minors.
    fn rank_below_three(rows: [[f64; 4]; 3]) -> f64 {
        let det3 = |c: [usize; 3]| {
            let m = |r: usize, k: usize| rows[r][c[k]];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        };
        [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
            .into_iter()
            .map(|c| det3(c).abs())
            .fold(0.0, f64::max)
    }

    proptest! {
        #[test]
        fn stereographic_image_on_quadric(x1 in -10.0..10.0f64, x2 in -10.0..10.0f64) {
            let p = proj_stereo(cp(x1, x2));
            prop_assert!(quadric_residual(&p) <= 1e-12);
            prop_assert!(p.projective_distance(&hp(line_intersection(x1, x2))) <= 1e-12);
        }

        #[test]
        fn normalization_point_collinear(x1 in -10.0..10.0f64, x2 in -10.0..10.0f64) {
            let rows = [
                HomogeneousPoint::E0.coords(),
                normalization_point(cp(x1, x2)).coords(),
                proj_stereo(cp(x1, x2)).coords(),
            ];
            let scale = (1.0 + x1 * x1).powi(2) * (1.0 + x2.abs());
            prop_assert!(rank_below_three(rows) <= 1e-12 * scale);
        }

        #[test]
        fn weierstrass_is_standardized(x1 in -10.0..10.0f64, x2 in -10.0..10.0f64) {
            let w = weierstrass(cp(x1, x2)).coords();
            prop_assert!((quadric_form(&w, &w) + 1.0).abs() <= 1e-12);
        }

        #[test]
        fn normal_is_conjugate_to_tangents(x1 in -3.0..3.0f64, x2 in -3.0..3.0f64) {
            let w = weierstrass(cp(x1, x2)).coords();
            let d1 = central_diff(|t| weierstrass(cp(t, x2)).coords(), x1, 1e-5);
            let d2 = central_diff(|t| weierstrass(cp(x1, t)).coords(), x2, 1e-5);
            prop_assert!(quadric_form(&w, &d1).abs() <= 1e-6);
            prop_assert!(quadric_form(&w, &d2).abs() <= 1e-6);
        }

        #[test]
        fn operators_are_tangent(y in prop::array::uniform4(-10.0..10.0f64)) {
            let p = hp(y);
            for i in 1..=3 {
                prop_assert_eq!(quadric_gradient_dot(&p, &killing_vector(i, &p)), 0.0);
            }
        }

        #[test]
        fn fibers_of_the_quadric(v in -5.0..5.0f64, x1 in -5.0..5.0f64) {
            let p = proj_stereo(cp(x1, projective_fiber_image(v, x1)));
            let scale = p.coords().iter().fold(1.0f64, |m, y| m.max(y.abs()));
            prop_assert!(fiber_equation(v, &p).abs() <= 1e-10 * scale);
        }
    }
}
