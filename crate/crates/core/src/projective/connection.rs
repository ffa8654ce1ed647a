//! Metric, connection and curvature induced on the normalized plane.
//!
//! With `w = 1 + x1^2` the only nonzero metric entry is `g11 = 4 / w^2` and
//! the nonzero Christoffel symbols are
//!
//! ```text
//! Γ¹₁₁ = Γ²₁₂ = Γ²₂₁ = -2 x1 / w,    Γ²₁₁ = 2 x2 / w.
//! ```
//!
//! Curvature uses
//! `R^i_{jkl} = ∂_k Γ^i_{lj} - ∂_l Γ^i_{kj} + Γ^i_{km} Γ^m_{lj} - Γ^i_{lm} Γ^m_{kj}`
//! and Ricci `R_{jl} = R^i_{jil}`. In this convention the only nonzero
//! components are `R²₁₂₁ = -R²₁₁₂ = 4 / w^2`, and `R₁₁ = 4 / w^2`. Other
//! index orderings flip the sign of the individual components but not of
//! the Ricci tensor.
//!
//! Indices in arrays are zero-based: `gammas[k][i][j]` is `Γ^{k+1}_{i+1,j+1}`.

#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};

use super::{quadric_form, weierstrass, ChartPoint};
use crate::numerics::central_diff;

/// `gammas[k][i][j] = Γ^k_{ij}`.
pub type Gammas = [[[f64; 2]; 2]; 2];
/// `riemann[i][j][k][l] = R^i_{jkl}`.
pub type Riemann = [[[[f64; 2]; 2]; 2]; 2];
pub type Metric = [[f64; 2]; 2];

/// The nonzero data of the connection at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConnectionData {
    pub g11: f64,
    /// `Γ¹₁₁`
    pub g1_11: f64,
    /// `Γ²₁₂`
    pub g2_12: f64,
    /// `Γ²₂₁`
    pub g2_21: f64,
    /// `Γ²₁₁`
    pub g2_11: f64,
}

impl ConnectionData {
    pub fn gammas(&self) -> Gammas {
        let mut g = [[[0.0; 2]; 2]; 2];
        g[0][0][0] = self.g1_11;
        g[1][0][1] = self.g2_12;
        g[1][1][0] = self.g2_21;
        g[1][0][0] = self.g2_11;
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curvature {
    /// `R²₁₂₁`
    pub r2_121: f64,
    /// `R₁₁`
    pub ricci_11: f64,
}

/// Source of metric and connection coefficients, with analytic first
/// derivatives of the Christoffel symbols.
pub trait Connection {
    fn metric(&self, c: ChartPoint) -> Metric;
    fn gammas(&self, c: ChartPoint) -> Gammas;
    /// `d[m][k][i][j] = ∂_m Γ^k_{ij}`.
    fn gamma_derivatives(&self, c: ChartPoint) -> [Gammas; 2];
}

/// The connection of the polar normalization with center `E0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NordenConnection;

impl Connection for NordenConnection {
    fn metric(&self, c: ChartPoint) -> Metric {
        [[metric_g11(c.x1), 0.0], [0.0, 0.0]]
    }

    fn gammas(&self, c: ChartPoint) -> Gammas {
        christoffel(c).gammas()
    }

    fn gamma_derivatives(&self, c: ChartPoint) -> [Gammas; 2] {
        let (x1, x2) = (c.x1, c.x2);
        let w = 1.0 + x1 * x1;
        let a1 = -2.0 * (1.0 - x1 * x1) / (w * w);
        let mut d1 = [[[0.0; 2]; 2]; 2];
        d1[0][0][0] = a1;
        d1[1][0][1] = a1;
        d1[1][1][0] = a1;
        d1[1][0][0] = -4.0 * x1 * x2 / (w * w);
        let mut d2 = [[[0.0; 2]; 2]; 2];
        d2[1][0][0] = 2.0 / w;
        [d1, d2]
    }
}

/// A connection with constant offsets added to selected Christoffel symbols.
/// Used as a negative control for the covariant-constancy detector.
#[derive(Debug, Clone, Copy)]
pub struct PerturbedConnection<C> {
    pub base: C,
    pub delta: Gammas,
}

impl<C: Connection> Connection for PerturbedConnection<C> {
    fn metric(&self, c: ChartPoint) -> Metric {
        self.base.metric(c)
    }

    fn gammas(&self, c: ChartPoint) -> Gammas {
        let mut g = self.base.gammas(c);
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    g[k][i][j] += self.delta[k][i][j];
                }
            }
        }
        g
    }

    fn gamma_derivatives(&self, c: ChartPoint) -> [Gammas; 2] {
        self.base.gamma_derivatives(c)
    }
}

/// `g11 = 4 / (1 + x1^2)^2`.
pub fn metric_g11(x1: f64) -> f64 {
    let w = 1.0 + x1 * x1;
    4.0 / (w * w)
}

/// `g_ij = -B(∂_i X̃, ∂_j X̃)` with the partials of the standardized
/// normalization point taken by central differences.
pub fn metric_fd(c: ChartPoint, h: f64) -> Metric {
    let d1 = central_diff(|t| weierstrass(ChartPoint { x1: t, ..c }).coords(), c.x1, h);
    let d2 = central_diff(|t| weierstrass(ChartPoint { x2: t, ..c }).coords(), c.x2, h);
    let d = [d1, d2];
    let mut g = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = -quadric_form(&d[i], &d[j]);
        }
    }
    g
}

pub fn christoffel(c: ChartPoint) -> ConnectionData {
    let w = 1.0 + c.x1 * c.x1;
    let a = -2.0 * c.x1 / w;
    ConnectionData {
        g11: metric_g11(c.x1),
        g1_11: a,
        g2_12: a,
        g2_21: a,
        g2_11: 2.0 * c.x2 / w,
    }
}

fn riemann_from(g: &Gammas, d: &[Gammas; 2]) -> Riemann {
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut v = d[k][i][l][j] - d[l][i][k][j];
                    for m in 0..2 {
                        v += g[i][k][m] * g[m][l][j] - g[i][l][m] * g[m][k][j];
                    }
                    r[i][j][k][l] = v;
                }
            }
        }
    }
    r
}

/// Full curvature tensor from analytic Christoffel derivatives.
pub fn riemann_tensor<C: Connection>(conn: &C, c: ChartPoint) -> Riemann {
    riemann_from(&conn.gammas(c), &conn.gamma_derivatives(c))
}

/// Full curvature tensor with `∂Γ` taken by central differences.
pub fn riemann_tensor_fd<C: Connection>(conn: &C, c: ChartPoint, h: f64) -> Riemann {
    let flat = |g: Gammas| -> [f64; 8] {
        let mut out = [0.0; 8];
        for (n, v) in g.iter().flatten().flatten().enumerate() {
            out[n] = *v;
        }
        out
    };
    let unflat = |v: [f64; 8]| -> Gammas {
        let mut g = [[[0.0; 2]; 2]; 2];
        for (n, x) in v.into_iter().enumerate() {
            g[n / 4][(n / 2) % 2][n % 2] = x;
        }
        g
    };
    let d1 = central_diff(|t| flat(conn.gammas(ChartPoint { x1: t, ..c })), c.x1, h);
    let d2 = central_diff(|t| flat(conn.gammas(ChartPoint { x2: t, ..c })), c.x2, h);
    riemann_from(&conn.gammas(c), &[unflat(d1), unflat(d2)])
}

/// `R_{jl} = R^i_{jil}`.
pub fn ricci_tensor(r: &Riemann) -> Metric {
    let mut ric = [[0.0; 2]; 2];
    for j in 0..2 {
        for l in 0..2 {
            ric[j][l] = (0..2).map(|i| r[i][j][i][l]).sum();
        }
    }
    ric
}

pub fn curvature(c: ChartPoint) -> Curvature {
    let r = riemann_tensor(&NordenConnection, c);
    Curvature {
        r2_121: r[1][0][1][0],
        ricci_11: ricci_tensor(&r)[0][0],
    }
}

/// Worst components of `∇g` and `∇R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovariantResiduals {
    pub grad_metric: f64,
    pub grad_curvature: f64,
}

pub fn covariant_residuals(c: ChartPoint, h: f64) -> CovariantResiduals {
    covariant_residuals_with(&NordenConnection, c, h)
}

/// `max |∇_k g_ij|` and `max |∇_m R^i_{jkl}|`, with the connection
/// coefficients taken from `conn` and partial derivatives of `g` and `R` by
/// central differences of step `h`.
pub fn covariant_residuals_with<C: Connection>(
    conn: &C,
    c: ChartPoint,
    h: f64,
) -> CovariantResiduals {
    let gam = conn.gammas(c);
    let at = |m: usize, t: f64| match m {
        0 => ChartPoint { x1: t, ..c },
        _ => ChartPoint { x2: t, ..c },
    };
    let coord = |m: usize| if m == 0 { c.x1 } else { c.x2 };

    let metric = conn.metric(c);
    let mut grad_metric = 0.0f64;
    for k in 0..2 {
        let dg = central_diff(
            |t| {
                let g = conn.metric(at(k, t));
                [g[0][0], g[0][1], g[1][0], g[1][1]]
            },
            coord(k),
            h,
        );
        for i in 0..2 {
            for j in 0..2 {
                let mut v = dg[2 * i + j];
                for m in 0..2 {
                    v -= gam[m][k][i] * metric[m][j] + gam[m][k][j] * metric[i][m];
                }
                grad_metric = grad_metric.max(v.abs());
            }
        }
    }

    let flat = |r: Riemann| -> [f64; 16] {
        let mut out = [0.0; 16];
        for (n, v) in r.iter().flatten().flatten().flatten().enumerate() {
            out[n] = *v;
        }
        out
    };
    let r = riemann_tensor(conn, c);
    let mut grad_curvature = 0.0f64;
    for m in 0..2 {
        let dr = central_diff(|t| flat(riemann_tensor(conn, at(m, t))), coord(m), h);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let mut v = dr[8 * i + 4 * j + 2 * k + l];
                        for p in 0..2 {
                            v += gam[i][m][p] * r[p][j][k][l];
                            v -= gam[p][m][j] * r[i][p][k][l];
                            v -= gam[p][m][k] * r[i][j][p][l];
                            v -= gam[p][m][l] * r[i][j][k][p];
                        }
                        grad_curvature = grad_curvature.max(v.abs());
                    }
                }
            }
        }
    }
    CovariantResiduals {
        grad_metric,
        grad_curvature,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::central_diff_scalar;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cp(x1: f64, x2: f64) -> ChartPoint {
        ChartPoint::new(x1, x2).unwrap()
    }

    #[test]
    fn metric_values() {
        assert_eq!(metric_g11(0.0), 4.0);
        assert_eq!(metric_g11(1.0), 1.0);
        for (x1, g) in [(0.0, 4.0), (1.0, 1.0)] {
            let fd = metric_fd(cp(x1, 0.7), 1e-5);
            assert!((fd[0][0] - g).abs() <= 1e-6, "{fd:?}");
            assert!(fd[0][1].abs() <= 1e-6 && fd[1][0].abs() <= 1e-6);
            assert_eq!(fd[1][1], 0.0);
        }
    }

    #[test]
    fn christoffel_values() {
        let c = christoffel(cp(0.0, 0.0));
        assert_eq!((c.g1_11, c.g2_12, c.g2_21, c.g2_11), (0.0, 0.0, 0.0, 0.0));
        let c = christoffel(cp(1.0, 2.0));
        assert_eq!(
            (c.g1_11, c.g2_12, c.g2_21, c.g2_11),
            (-1.0, -1.0, -1.0, 2.0)
        );
        let g = c.gammas();
        assert_eq!(g[0][0][1], 0.0);
        assert_eq!(g[0][1][1], 0.0);
        assert_eq!(g[1][1][1], 0.0);
    }

    #[test]
    fn curvature_values() {
        for x2 in [0.0, -2.5, 7.0] {
            let k = curvature(cp(0.0, x2));
            assert_relative_eq!(k.r2_121, 4.0, epsilon = 1e-14);
            assert_relative_eq!(k.ricci_11, 4.0, epsilon = 1e-14);
        }
        assert_relative_eq!(curvature(cp(1.0, 0.0)).r2_121, 1.0, epsilon = 1e-14);
        // same values through finite-difference derivatives of Γ
        let r = riemann_tensor_fd(&NordenConnection, cp(0.0, 3.0), 1e-5);
        assert!((r[1][0][1][0] - 4.0).abs() <= 1e-6);
        let r = riemann_tensor_fd(&NordenConnection, cp(1.0, 0.0), 1e-5);
        assert!((r[1][0][1][0] - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn covariant_constancy_examples() {
        for c in [cp(0.0, 0.0), cp(1.0, 2.0)] {
            let res = covariant_residuals(c, 1e-5);
            assert!(res.grad_metric <= 1e-6, "{res:?}");
            assert!(res.grad_curvature <= 1e-6, "{res:?}");
        }
    }

    #[test]
    fn detector_catches_broken_metric_compatibility() {
        let mut delta = [[[0.0; 2]; 2]; 2];
        delta[0][0][0] = 0.1;
        let conn = PerturbedConnection {
            base: NordenConnection,
            delta,
        };
        let res = covariant_residuals_with(&conn, cp(0.0, 0.0), 1e-5);
        assert!(res.grad_metric > 1e-3, "{res:?}");
    }

    #[test]
    fn shifting_gamma2_11_is_invisible_to_metric_and_curvature() {
        // g has rank one along x1, so ∇g involves only Γ¹ symbols, and a
        // constant shift of Γ²₁₁ cancels out of R and ∇R.
        let mut delta = [[[0.0; 2]; 2]; 2];
        delta[1][0][0] = 0.1;
        let conn = PerturbedConnection {
            base: NordenConnection,
            delta,
        };
        for c in [cp(0.0, 0.0), cp(1.0, 2.0), cp(-2.0, 0.5)] {
            let res = covariant_residuals_with(&conn, c, 1e-5);
            assert!(
                res.grad_metric <= 1e-6 && res.grad_curvature <= 1e-6,
                "{res:?}"
            );
        }
    }

    #[test]
    fn detector_catches_broken_curvature_parallelism() {
        let mut delta = [[[0.0; 2]; 2]; 2];
        delta[1][0][1] = 0.1;
        delta[1][1][0] = 0.1;
        let conn = PerturbedConnection {
            base: NordenConnection,
            delta,
        };
        let res = covariant_residuals_with(&conn, cp(0.5, 0.0), 1e-5);
        assert!(res.grad_curvature > 1e-3, "{res:?}");
    }

    #[test]
    fn only_expected_components_are_nonzero() {
        let r = riemann_tensor(&NordenConnection, cp(0.8, -1.3));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expected = match (i, j, k, l) {
                            (1, 0, 1, 0) => metric_g11(0.8),
                            (1, 0, 0, 1) => -metric_g11(0.8),
                            _ => 0.0,
                        };
                        assert!((r[i][j][k][l] - expected).abs() < 1e-14, "R[{i}{j}{k}{l}]");
                    }
                }
            }
        }
        let ric = ricci_tensor(&r);
        assert_eq!(ric[0][1], 0.0);
        assert_eq!(ric[1][0], 0.0);
        assert_eq!(ric[1][1], 0.0);
    }

    proptest! {
        #[test]
        fn metric_matches_embedding(x1 in -3.0..3.0f64, x2 in -3.0..3.0f64) {
            let fd = metric_fd(cp(x1, x2), 1e-5);
            prop_assert!((fd[0][0] - metric_g11(x1)).abs() <= 1e-6);
            prop_assert!(fd[1][1].abs() <= 1e-6);
        }

        #[test]
        fn equiaffine(x1 in -5.0..5.0f64, x2 in -5.0..5.0f64) {
            let g = christoffel(cp(x1, x2)).gammas();
            let trace1 = g[0][0][0] + g[1][0][1];
            let trace2 = g[0][1][0] + g[1][1][1];
            let log_volume = |t: f64| (1.0 / (1.0 + t * t).powi(2)).ln();
            prop_assert!((trace1 - central_diff_scalar(log_volume, x1, 1e-5)).abs() <= 1e-6);
            prop_assert_eq!(trace2, 0.0);
        }

        #[test]
        fn analytic_derivatives_match_fd(x1 in -3.0..3.0f64, x2 in -3.0..3.0f64) {
            let a = riemann_tensor(&NordenConnection, cp(x1, x2));
            let b = riemann_tensor_fd(&NordenConnection, cp(x1, x2), 1e-5);
            for (u, v) in a.iter().flatten().flatten().flatten().zip(b.iter().flatten().flatten().flatten()) {
                prop_assert!((u - v).abs() <= 1e-6);
            }
        }

        #[test]
        fn antisymmetric_in_last_pair(x1 in -5.0..5.0f64, x2 in -5.0..5.0f64) {
            let r = riemann_tensor(&NordenConnection, cp(x1, x2));
            prop_assert_eq!(r[1][0][1][0], -r[1][0][0][1]);
        }
    }
}
