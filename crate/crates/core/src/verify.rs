//! Seeded property suites.
//!
//! Each suite draws its own [`Sampler`] stream from `(seed, suite index)`, so
//! reports depend only on the seed, the trial count and the tolerances.
//! Residuals are relative to the natural magnitude of the compared
//! quantities unless a suite says otherwise.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::bundle::{self, AdaptedCoords, Chart, SpherePoint};
use crate::conformal::{self, PlanePoint};
use crate::motions::{self, IsometryParams, RotationKind, Sign};
use crate::numerics::{central_diff, central_diff_scalar, rk4, Sampler, Tolerances};
use crate::projective::{self, ChartPoint, GeodesicParams, HomogeneousPoint, NordenConnection};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

struct Tracker {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
    counterexample: Option<String>,
}

impl Tracker {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            cases: 0,
            worst: 0.0,
            counterexample: None,
        }
    }

    fn record(&mut self, residual: f64, context: impl FnOnce() -> String) {
        self.cases += 1;
        let residual = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if residual > self.worst {
            self.worst = residual;
            if residual > self.tolerance {
                self.counterexample = Some(context());
            }
        }
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            cases: self.cases,
            worst_residual: self.worst,
            tolerance: self.tolerance,
            passed: self.worst <= self.tolerance,
            counterexample: self.counterexample,
        }
    }
}

type SuiteFn = fn(&mut Sampler, usize, &Tolerances) -> SuiteReport;

/// All suites in report order.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("algebra.associativity", algebra_associativity),
    ("algebra.homomorphism", algebra_homomorphism),
    ("algebra.anti_homomorphism", algebra_anti_homomorphism),
    ("algebra.form_realness", algebra_form_realness),
    (
        "algebra.norm_multiplicativity",
        algebra_norm_multiplicativity,
    ),
    ("algebra.inverse", algebra_inverse),
    ("motions.form_equivariance", motions_form_equivariance),
    ("motions.anti_rotation_swap", motions_anti_rotation_swap),
    ("motions.double_reflection", motions_double_reflection),
    ("motions.component_product", motions_component_product),
    ("motions.isometry_distance", motions_isometry_distance),
    ("bundle.adapted_round_trip", bundle_adapted_round_trip),
    ("bundle.base_projection", bundle_base_projection),
    ("bundle.projection_invariance", bundle_projection_invariance),
    ("bundle.structure_action", bundle_structure_action),
    ("bundle.group_action", bundle_group_action),
    ("bundle.sphere_embedding", bundle_sphere_embedding),
    ("bundle.sphere_lambda", bundle_sphere_lambda),
    ("conformal.plane_round_trip", conformal_plane_round_trip),
    ("conformal.sphere_round_trip", conformal_sphere_round_trip),
    ("conformal.inverse_on_sphere", conformal_inverse_on_sphere),
    (
        "conformal.component_dichotomy",
        conformal_component_dichotomy,
    ),
    ("conformal.conformality", conformal_conformality),
    ("conformal.p_diagram", conformal_p_diagram),
    ("conformal.fiber_parabola", conformal_fiber_parabola),
    ("conformal.fiber_length", conformal_fiber_length),
    ("projective.quadric", projective_quadric),
    ("projective.weierstrass", projective_weierstrass),
    ("projective.conjugacy", projective_conjugacy),
    ("projective.metric", projective_metric),
    ("projective.equiaffinity", projective_equiaffinity),
    ("projective.equiaffinity_fd", projective_equiaffinity_fd),
    ("projective.covariant_metric", projective_covariant_metric),
    (
        "projective.covariant_curvature",
        projective_covariant_curvature,
    ),
    ("projective.ricci", projective_ricci),
    ("projective.ricci_fd", projective_ricci_fd),
    ("projective.killing", projective_killing),
    ("projective.fiber", projective_fiber),
    ("geodesic.ode_residual", geodesic_ode_residual),
    ("geodesic.graph_form", geodesic_graph_form),
    ("geodesic.rk4_agreement", geodesic_rk4_agreement),
    ("geodesic.vertical", geodesic_vertical),
    ("numerics.rk4_order", numerics_rk4_order),
    ("numerics.fd_order", numerics_fd_order),
];

/// Runs one suite by name.
pub fn run_suite(name: &str, seed: u64, trials: usize, tol: &Tolerances) -> Option<SuiteReport> {
    SUITES
        .iter()
        .enumerate()
        .find(|(_, (n, _))| *n == name)
        .map(|(i, (_, f))| f(&mut Sampler::fork(seed, i as u64), trials, tol))
}

/// Runs every suite whose name starts with `prefix`, one thread per suite.
/// Reports come back in [`SUITES`] order.
pub fn run_prefix(prefix: &str, seed: u64, trials: usize, tol: &Tolerances) -> Vec<SuiteReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .filter(|(_, (n, _))| n.starts_with(prefix))
            .map(|(i, (_, f))| {
                scope.spawn(move || f(&mut Sampler::fork(seed, i as u64), trials, tol))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite panicked"))
            .collect()
    })
}

pub fn run_all(seed: u64, trials: usize, tol: &Tolerances) -> Report {
    let suites = run_prefix("", seed, trials, tol);
    Report {
        seed,
        trials,
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}

// ---------------------------------------------------------------- samplers

fn element(s: &mut Sampler, r: f64) -> AlgebraElement {
    AlgebraElement::raw(s.uniform(-r, r), s.uniform(-r, r), s.uniform(-r, r))
}

fn unit_element(s: &mut Sampler) -> AlgebraElement {
    let phi = s.uniform(-2.0, 2.0);
    let branch = if s.sign() > 0.0 {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let u = s.uniform(-5.0, 5.0);
    let kind = if s.sign() > 0.0 {
        RotationKind::Rotation
    } else {
        RotationKind::Anti
    };
    motions::rotation_element(phi, branch, u, kind)
}

fn invertible(s: &mut Sampler, min_norm: f64) -> AlgebraElement {
    loop {
        let x = element(s, 10.0);
        if x.norm_sq().abs() > min_norm {
            return x;
        }
    }
}

fn scale_of(xs: &[AlgebraElement]) -> f64 {
    xs.iter().map(|x| x.max_abs()).product::<f64>().max(1.0)
}

fn sphere_point(s: &mut Sampler) -> SpherePoint {
    SpherePoint {
        eps: s.sign(),
        u: s.uniform(-5.0, 5.0),
        phi: s.uniform(-3.0, 3.0),
    }
}

/// Sphere point whose image is a finite plane point, away from the pole line.
fn sphere_point_off_pole(s: &mut Sampler) -> SpherePoint {
    loop {
        let p = sphere_point(s);
        if p.eps < 0.0 || p.phi.abs() > 1e-2 {
            return p;
        }
    }
}

fn plane_point(s: &mut Sampler, branch_gap: f64) -> (f64, f64) {
    loop {
        let x = s.uniform(-10.0, 10.0);
        if (x * x - 1.0).abs() > branch_gap {
            return (x, s.uniform(-10.0, 10.0));
        }
    }
}

fn chart_point(s: &mut Sampler, r: f64) -> ChartPoint {
    ChartPoint {
        x1: s.uniform(-r, r),
        x2: s.uniform(-r, r),
    }
}

fn max_abs<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

// ------------------------------------------------------------------ algebra

fn algebra_associativity(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("algebra.associativity", tol.exact_rel);
    for _ in 0..n {
        let (x, y, z) = (element(s, 10.0), element(s, 10.0), element(s, 10.0));
        let r = ((x * y) * z).dist_max(x * (y * z)) / scale_of(&[x, y, z]);
        t.record(r, || format!("x={x:?} y={y:?} z={z:?}"));
    }
    t.finish()
}

fn algebra_homomorphism(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("algebra.homomorphism", tol.exact_rel);
    for _ in 0..n {
        let (x, y) = (element(s, 10.0), element(s, 10.0));
        let (m, p) = ((x * y).to_matrix(), x.to_matrix() * y.to_matrix());
        let d = (m.a - p.a)
            .abs()
            .max((m.b - p.b).abs())
            .max((m.c - p.c).abs());
        t.record(d / scale_of(&[x, y]), || format!("x={x:?} y={y:?}"));
    }
    t.finish()
}

fn algebra_anti_homomorphism(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("algebra.anti_homomorphism", tol.exact_rel);
    for _ in 0..n {
        let (x, y) = (element(s, 10.0), element(s, 10.0));
        let r = (x * y).conj().dist_max(y.conj() * x.conj()) / scale_of(&[x, y]);
        t.record(r, || format!("x={x:?} y={y:?}"));
    }
    t.finish()
}

fn algebra_form_realness(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("algebra.form_realness", tol.exact_rel);
    for _ in 0..n {
        let (x, y) = (element(s, 10.0), element(s, 10.0));
        let h = (x * y.conj() + y * x.conj()).scale(0.5);
        let r = h
            .x1()
            .abs()
            .max(h.x2().abs())
            .max((h.x0() - x.bilinear(y)).abs())
            / scale_of(&[x, y]);
        t.record(r, || format!("x={x:?} y={y:?}"));
    }
    t.finish()
}

fn algebra_norm_multiplicativity(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("algebra.norm_multiplicativity", tol.algebraic_rel);
    for _ in 0..n {
        let (x, y) = (element(s, 10.0), element(s, 10.0));
        let r = ((x * y).norm_sq() - x.norm_sq() * y.norm_sq()).abs() / scale_of(&[x, x, y, y]);
        t.record(r, || format!("x={x:?} y={y:?}"));
    }
    t.finish()
}

fn algebra_inverse(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("algebra.inverse", tol.algebraic_rel);
    for _ in 0..n {
        let x = invertible(s, 1e-6);
        let inv = match x.inverse() {
            Ok(v) => v,
            Err(_) => {
                t.record(f64::INFINITY, || format!("x={x:?} not invertible"));
                continue;
            }
        };
        let one = AlgebraElement::ONE;
        let r = (x * inv).dist_max(one).max((inv * x).dist_max(one)) / scale_of(&[x, inv]);
        t.record(r, || format!("x={x:?}"));
    }
    t.finish()
}

// ------------------------------------------------------------------ motions

fn motions_form_equivariance(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("motions.form_equivariance", tol.algebraic_rel);
    for _ in 0..n {
        let (a, x, y) = (element(s, 10.0), element(s, 10.0), element(s, 10.0));
        let expected = a.norm_sq() * x.bilinear(y);
        let left = ((a * x).bilinear(a * y) - expected).abs();
        let right = ((x * a).bilinear(y * a) - expected).abs();
        t.record(left.max(right) / scale_of(&[a, a, x, y]), || {
            format!("a={a:?} x={x:?} y={y:?}")
        });
    }
    t.finish()
}

fn motions_anti_rotation_swap(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("motions.anti_rotation_swap", tol.algebraic_rel);
    for _ in 0..n {
        let phi = s.uniform(-2.0, 2.0);
        let u = s.uniform(-5.0, 5.0);
        let branch = if s.sign() > 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let a = motions::rotation_element(phi, branch, u, RotationKind::Anti);
        let x = element(s, 10.0);
        let r = ((a * x).norm_sq() + x.norm_sq()).abs() / scale_of(&[a, a, x, x]);
        t.record(r, || format!("a={a:?} x={x:?}"));
    }
    t.finish()
}

fn motions_double_reflection(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("motions.double_reflection", tol.algebraic_rel);
    for _ in 0..n {
        let (n1, n2, x) = (unit_element(s), unit_element(s), element(s, 10.0));
        let twice = motions::reflect(n1, x).and_then(|y| motions::reflect(n2, y));
        let proper = motions::proper_motion(n2 * n1.conj(), n1.conj() * n2, x);
        let r = match (twice, proper) {
            (Ok(p), Ok(q)) => p.dist_max(q) / scale_of(&[n1, n1, n2, n2, x]),
            _ => f64::INFINITY,
        };
        t.record(r, || format!("n1={n1:?} n2={n2:?} x={x:?}"));
    }
    t.finish()
}

fn motions_component_product(s: &mut Sampler, n: usize, _tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("motions.component_product", 0.0);
    for _ in 0..n {
        let (x, y) = (invertible(s, 1e-6), invertible(s, 1e-6));
        let r = match (
            motions::classify_component(x),
            motions::classify_component(y),
            motions::classify_component(x * y),
        ) {
            (Ok(cx), Ok(cy), Ok(cxy)) => {
                let ok = cxy.sign_plus == cx.sign_plus * cy.sign_plus
                    && cxy.sign_minus == cx.sign_minus * cy.sign_minus;
                if ok {
                    0.0
                } else {
                    1.0
                }
            }
            _ => 1.0,
        };
        t.record(r, || format!("x={x:?} y={y:?}"));
    }
    t.finish()
}

fn motions_isometry_distance(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("motions.isometry_distance", tol.algebraic_rel);
    for _ in 0..n {
        let mut u2 = 0.0f64;
        while u2.abs() < 1e-3 {
            u2 = s.uniform(-5.0, 5.0);
        }
        let p = IsometryParams {
            phi: s.uniform(-2.0, 2.0),
            a0: s.uniform(-5.0, 5.0),
            a1: s.uniform(-5.0, 5.0),
            a2: s.uniform(-5.0, 5.0),
            u0: s.uniform(-5.0, 5.0),
            u1: s.uniform(-5.0, 5.0),
            u2,
        };
        let (x, y) = (element(s, 10.0), element(s, 10.0));
        let r = match (
            motions::apply_isometry(&p, x),
            motions::apply_isometry(&p, y),
        ) {
            (Ok(xp), Ok(yp)) => {
                let scale = ((x - y).max_abs() * p.phi.cosh()).powi(2).max(1.0);
                ((xp - yp).norm_sq() - (x - y).norm_sq()).abs() / scale
            }
            _ => f64::INFINITY,
        };
        t.record(r, || format!("p={p:?} x={x:?} y={y:?}"));
    }
    t.finish()
}

// ------------------------------------------------------------------- bundle

fn adapted_coords(s: &mut Sampler) -> AdaptedCoords {
    AdaptedCoords {
        chart: if s.sign() > 0.0 {
            Chart::Timelike
        } else {
            Chart::Spacelike
        },
        u: s.uniform(-5.0, 5.0),
        lambda: s.sign() * s.uniform(0.2, 3.0),
        phi: s.uniform(-2.0, 2.0),
    }
}

fn bundle_adapted_round_trip(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.adapted_round_trip", tol.algebraic_rel);
    for _ in 0..n {
        let x = invertible(s, 1e-6);
        let r = match bundle::to_adapted(x) {
            Ok(c) => bundle::from_adapted(&c).dist_max(x) / x.max_abs().max(1.0),
            Err(_) => f64::INFINITY,
        };
        t.record(r, || format!("x={x:?}"));
    }
    t.finish()
}

fn bundle_base_projection(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.base_projection", tol.exact_rel);
    for _ in 0..n {
        let c = AdaptedCoords {
            chart: Chart::Timelike,
            u: s.uniform(-10.0, 10.0),
            lambda: s.sign() * s.uniform(0.1, 5.0),
            phi: s.uniform(-3.0, 3.0),
        };
        let r = match bundle::project_base(bundle::from_adapted(&c)) {
            Ok(u) => (u - c.u).abs() / c.u.abs().max(1.0),
            Err(_) => f64::INFINITY,
        };
        t.record(r, || format!("c={c:?}"));
    }
    t.finish()
}

fn bundle_projection_invariance(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.projection_invariance", tol.algebraic_rel);
    for _ in 0..n {
        let a = bundle::structure_element(s.sign() * s.uniform(0.2, 3.0), s.uniform(-2.0, 2.0));
        let x = loop {
            let x = element(s, 10.0);
            if (x.x0() + x.x1()).abs() > 0.1 {
                break x;
            }
        };
        let r = match (bundle::project_base(x), bundle::project_base(a * x)) {
            (Ok(u), Ok(v)) => (u - v).abs() / u.abs().max(1.0),
            _ => f64::INFINITY,
        };
        t.record(r, || format!("a={a:?} x={x:?}"));
    }
    t.finish()
}

fn bundle_structure_action(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.structure_action", tol.algebraic_rel);
    for _ in 0..n {
        let c = adapted_coords(s);
        let (rho, psi) = (s.sign() * s.uniform(0.2, 3.0), s.uniform(-2.0, 2.0));
        let acted = bundle::structure_action(rho, psi, &c);
        let via_algebra =
            bundle::to_adapted(bundle::structure_element(rho, psi) * bundle::from_adapted(&c));
        let r = match via_algebra {
            Ok(v) if v.chart == acted.chart => {
                let d = (v.u - acted.u)
                    .abs()
                    .max((v.lambda - acted.lambda).abs())
                    .max((v.phi - acted.phi).abs());
                d / acted
                    .u
                    .abs()
                    .max(acted.lambda.abs())
                    .max(acted.phi.abs())
                    .max(1.0)
            }
            _ => f64::INFINITY,
        };
        t.record(r, || format!("c={c:?} rho={rho} psi={psi}"));
    }
    t.finish()
}

fn bundle_group_action(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.group_action", tol.exact_rel);
    for _ in 0..n {
        let c = adapted_coords(s);
        let (r1, p1) = (s.sign() * s.uniform(0.2, 3.0), s.uniform(-2.0, 2.0));
        let (r2, p2) = (s.sign() * s.uniform(0.2, 3.0), s.uniform(-2.0, 2.0));
        let twice = bundle::structure_action(r2, p2, &bundle::structure_action(r1, p1, &c));
        let once = bundle::structure_action(r1 * r2, p1 + p2, &c);
        let d = (twice.u - c.u)
            .abs()
            .max((twice.lambda - once.lambda).abs() / once.lambda.abs().max(1.0))
            .max((twice.phi - once.phi).abs() / once.phi.abs().max(1.0));
        t.record(d, || format!("c={c:?} r1={r1} p1={p1} r2={r2} p2={p2}"));
    }
    t.finish()
}

fn bundle_sphere_embedding(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.sphere_embedding", tol.exact_rel);
    for _ in 0..n {
        let p = sphere_point(s);
        let x = bundle::sphere_embed(&p);
        let r = (x.x0() * x.x0() - x.x1() * x.x1() - 1.0).abs();
        t.record(r, || format!("p={p:?}"));
    }
    t.finish()
}

fn bundle_sphere_lambda(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("bundle.sphere_lambda", tol.algebraic_rel);
    for _ in 0..n {
        let p = sphere_point(s);
        let r = match bundle::to_adapted(bundle::sphere_embed(&p)) {
            Ok(c) => (c.lambda.abs() - 1.0).abs().max((c.lambda - p.eps).abs()),
            Err(_) => f64::INFINITY,
        };
        t.record(r, || format!("p={p:?}"));
    }
    t.finish()
}

// ---------------------------------------------------------------- conformal

fn conformal_plane_round_trip(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.plane_round_trip", tol.algebraic_rel);
    for _ in 0..n {
        let (x, y) = plane_point(s, 1e-3);
        let p = PlanePoint::Finite { x, y };
        let r = match conformal::stereo_from_plane(&p).and_then(conformal::stereo_to_plane) {
            Ok(PlanePoint::Finite { x: xb, y: yb }) => {
                (xb - x).abs().max((yb - y).abs()) / x.abs().max(y.abs()).max(1.0)
            }
            _ => f64::INFINITY,
        };
        t.record(r, || format!("x={x} y={y}"));
    }
    t.finish()
}

fn conformal_sphere_round_trip(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.sphere_round_trip", tol.algebraic_rel);
    for _ in 0..n {
        let sp = sphere_point_off_pole(s);
        let x = bundle::sphere_embed(&sp);
        let r = match conformal::stereo_to_plane(x).and_then(|p| conformal::stereo_from_plane(&p)) {
            Ok(back) => back.dist_max(x) / x.max_abs().max(1.0),
            Err(_) => f64::INFINITY,
        };
        t.record(r, || format!("p={sp:?}"));
    }
    t.finish()
}

fn conformal_inverse_on_sphere(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.inverse_on_sphere", tol.exact_rel);
    for _ in 0..n {
        let (x, y) = plane_point(s, 1e-3);
        let r = match conformal::stereo_from_plane(&PlanePoint::Finite { x, y }) {
            Ok(e) => (e.x0() * e.x0() - e.x1() * e.x1() - 1.0).abs() / e.x0().powi(2).max(1.0),
            Err(_) => f64::INFINITY,
        };
        t.record(r, || format!("x={x} y={y}"));
    }
    t.finish()
}

fn conformal_component_dichotomy(s: &mut Sampler, n: usize, _tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.component_dichotomy", 0.0);
    for _ in 0..n {
        let sp = sphere_point_off_pole(s);
        let r = match conformal::stereo_to_plane(bundle::sphere_embed(&sp)) {
            Ok(PlanePoint::Finite { x, .. }) if (x.abs() > 1.0) == (sp.eps > 0.0) => 0.0,
            _ => 1.0,
        };
        t.record(r, || format!("p={sp:?}"));
    }
    t.finish()
}

fn conformal_conformality(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.conformality", tol.fd_abs);
    for _ in 0..n {
        let (x, y) = plane_point(s, 0.1);
        // φ read off the sphere point above the plane point
        let phi = |v: f64| {
            conformal::stereo_from_plane(&PlanePoint::Finite { x: v, y })
                .and_then(bundle::sphere_project)
                .map(|p| p.phi)
                .unwrap_or(f64::NAN)
        };
        let dphi = central_diff_scalar(phi, x, tol.fd_step);
        let r = match conformal::conformal_factor(x) {
            Ok(f) => (dphi * dphi - f).abs() / f.max(1.0),
            Err(_) => f64::INFINITY,
        };
        t.record(r, || format!("x={x} y={y}"));
    }
    t.finish()
}

fn conformal_p_diagram(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.p_diagram", tol.algebraic_rel);
    for _ in 0..n {
        let (x, y) = loop {
            let (x, y) = plane_point(s, 1e-3);
            if (x - 1.0).abs() > 1e-2 {
                break (x, y);
            }
        };
        let p = PlanePoint::Finite { x, y };
        let r = match (
            conformal::bundle_map_p(&p),
            conformal::stereo_from_plane(&p).and_then(bundle::project_base),
        ) {
            (Ok(u), Ok(v)) => (u - v).abs() / u.abs().max(1.0),
            _ => f64::INFINITY,
        };
        t.record(r, || format!("x={x} y={y}"));
    }
    t.finish()
}

fn conformal_fiber_parabola(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.fiber_parabola", tol.algebraic_rel);
    for _ in 0..n {
        let sp = sphere_point_off_pole(s);
        let r = match conformal::stereo_to_plane(bundle::sphere_embed(&sp)) {
            Ok(PlanePoint::Finite { x, y }) => {
                (y - conformal::fiber_image(sp.u, x)).abs() / y.abs().max(1.0)
            }
            _ => f64::INFINITY,
        };
        t.record(r, || format!("p={sp:?}"));
    }
    t.finish()
}

fn conformal_fiber_length(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("conformal.fiber_length", tol.fd_abs);
    for _ in 0..n.min(1000) {
        let c = s.uniform(-5.0, 5.0);
        let (a, b) = match s.next_u64() % 3 {
            0 => (s.uniform(-0.8, 0.8), s.uniform(-0.8, 0.8)),
            1 => (s.uniform(1.2, 6.0), s.uniform(1.2, 6.0)),
            _ => (s.uniform(-6.0, -1.2), s.uniform(-6.0, -1.2)),
        };
        let phi = |x: f64| {
            conformal::stereo_from_plane(&PlanePoint::Finite {
                x,
                y: conformal::fiber_image(c, x),
            })
            .and_then(bundle::sphere_project)
            .map(|p| p.phi)
        };
        let r = match (phi(a), phi(b), conformal::segment_length_sq(a, b, 4000)) {
            (Ok(pa), Ok(pb), Ok(len_sq)) => (len_sq + (pb - pa).powi(2)).abs(),
            _ => f64::INFINITY,
        };
        t.record(r, || format!("c={c} a={a} b={b}"));
    }
    t.finish()
}

// --------------------------------------------------------------- projective

fn projective_quadric(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.quadric", tol.exact_rel);
    for _ in 0..n {
        let c = chart_point(s, 10.0);
        t.record(
            projective::quadric_residual(&projective::proj_stereo(c)),
            || format!("{c:?}"),
        );
    }
    t.finish()
}

fn projective_weierstrass(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.weierstrass", tol.exact_rel);
    for _ in 0..n {
        let c = chart_point(s, 10.0);
        let w = projective::weierstrass(c).coords();
        t.record((projective::quadric_form(&w, &w) + 1.0).abs(), || {
            format!("{c:?}")
        });
    }
    t.finish()
}

fn projective_conjugacy(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.conjugacy", tol.fd_abs);
    for _ in 0..n {
        let c = chart_point(s, 3.0);
        let w = projective::weierstrass(c).coords();
        let d1 = central_diff(
            |v| projective::weierstrass(ChartPoint { x1: v, ..c }).coords(),
            c.x1,
            tol.fd_step,
        );
        let d2 = central_diff(
            |v| projective::weierstrass(ChartPoint { x2: v, ..c }).coords(),
            c.x2,
            tol.fd_step,
        );
        let r = projective::quadric_form(&w, &d1)
            .abs()
            .max(projective::quadric_form(&w, &d2).abs());
        t.record(r, || format!("{c:?}"));
    }
    t.finish()
}

fn projective_metric(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.metric", tol.fd_abs);
    for _ in 0..n {
        let c = chart_point(s, 3.0);
        let g = projective::metric_fd(c, tol.fd_step);
        let r = (g[0][0] - projective::metric_g11(c.x1))
            .abs()
            .max(g[0][1].abs())
            .max(g[1][0].abs())
            .max(g[1][1].abs());
        t.record(r, || format!("{c:?}"));
    }
    t.finish()
}

fn trace_gammas(c: ChartPoint) -> [f64; 2] {
    let g = projective::christoffel(c).gammas();
    [g[0][0][0] + g[1][0][1], g[0][1][0] + g[1][1][1]]
}

fn projective_equiaffinity(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.equiaffinity", tol.algebraic_rel);
    for _ in 0..n {
        let c = chart_point(s, 5.0);
        let [t1, t2] = trace_gammas(c);
        // d/dx1 ln(1/(1+x1^2)^2) = -4 x1 / (1 + x1^2)
        let grad = -4.0 * c.x1 / (1.0 + c.x1 * c.x1);
        t.record((t1 - grad).abs().max(t2.abs()), || format!("{c:?}"));
    }
    t.finish()
}

fn projective_equiaffinity_fd(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.equiaffinity_fd", tol.fd_abs);
    for _ in 0..n {
        let c = chart_point(s, 5.0);
        let [t1, t2] = trace_gammas(c);
        let grad = central_diff_scalar(|v| (1.0 / (1.0 + v * v).powi(2)).ln(), c.x1, tol.fd_step);
        t.record((t1 - grad).abs().max(t2.abs()), || format!("{c:?}"));
    }
    t.finish()
}

/// The 21 x 21 grid over `[-3, 3]^2`.
pub fn covariant_grid() -> impl Iterator<Item = ChartPoint> {
    (0..21).flat_map(|i| {
        (0..21).map(move |j| ChartPoint {
            x1: -3.0 + 0.3 * i as f64,
            x2: -3.0 + 0.3 * j as f64,
        })
    })
}

fn projective_covariant_metric(_: &mut Sampler, _: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.covariant_metric", tol.fd_abs);
    for c in covariant_grid() {
        let r = projective::covariant_residuals(c, tol.fd_step).grad_metric;
        t.record(r, || format!("{c:?}"));
    }
    t.finish()
}

fn projective_covariant_curvature(_: &mut Sampler, _: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.covariant_curvature", tol.fd_abs);
    for c in covariant_grid() {
        let r = projective::covariant_residuals(c, tol.fd_step).grad_curvature;
        t.record(r, || format!("{c:?}"));
    }
    t.finish()
}

fn ricci_residual(ric: &[[f64; 2]; 2], x1: f64) -> f64 {
    let expected = 4.0 / (1.0 + x1 * x1).powi(2);
    (ric[0][0] - expected)
        .abs()
        .max(ric[0][1].abs())
        .max(ric[1][0].abs())
        .max(ric[1][1].abs())
        .max((ric[0][1] - ric[1][0]).abs())
}

fn projective_ricci(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.ricci", tol.algebraic_rel);
    for _ in 0..n {
        let c = chart_point(s, 5.0);
        let ric = projective::ricci_tensor(&projective::riemann_tensor(&NordenConnection, c));
        t.record(ricci_residual(&ric, c.x1), || format!("{c:?}"));
    }
    t.finish()
}

fn projective_ricci_fd(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.ricci_fd", tol.fd_abs);
    for _ in 0..n {
        let c = chart_point(s, 3.0);
        let ric = projective::ricci_tensor(&projective::riemann_tensor_fd(
            &NordenConnection,
            c,
            tol.fd_step,
        ));
        t.record(ricci_residual(&ric, c.x1), || format!("{c:?}"));
    }
    t.finish()
}

fn projective_killing(s: &mut Sampler, n: usize, _tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.killing", 0.0);
    for _ in 0..n {
        let y = [
            s.uniform(-10.0, 10.0),
            s.uniform(-10.0, 10.0),
            s.uniform(-10.0, 10.0),
            s.uniform(-10.0, 10.0),
        ];
        let p = match HomogeneousPoint::new(y) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let r = (1..=3)
            .map(|i| projective::quadric_gradient_dot(&p, &projective::killing_vector(i, &p)).abs())
            .fold(0.0, f64::max);
        t.record(r, || format!("y={y:?}"));
    }
    t.finish()
}

fn projective_fiber(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("projective.fiber", tol.algebraic_rel);
    for _ in 0..n {
        let (v, x1) = (s.uniform(-5.0, 5.0), s.uniform(-5.0, 5.0));
        let p = projective::proj_stereo(ChartPoint {
            x1,
            x2: projective::projective_fiber_image(v, x1),
        });
        let scale = max_abs(&p.coords()).max(1.0);
        t.record(projective::fiber_equation(v, &p).abs() / scale, || {
            format!("v={v} x1={x1}")
        });
    }
    t.finish()
}

// ---------------------------------------------------------------- geodesics

fn geodesic_params(s: &mut Sampler) -> GeodesicParams {
    GeodesicParams {
        omega: s.sign() * s.uniform(0.1, 3.0),
        phase: s.uniform(-1.5, 1.5),
        a: s.uniform(-5.0, 5.0),
        b: s.uniform(-5.0, 5.0),
    }
}

/// A time whose angle stays at least 0.1 away from the poles of `tan`.
fn regular_time(s: &mut Sampler, p: &GeodesicParams) -> f64 {
    loop {
        let t = s.uniform(-2.0, 2.0);
        if (p.omega * t + p.phase).cos().abs() >= 0.1f64.sin() {
            return t;
        }
    }
}

fn geodesic_ode_residual(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("geodesic.ode_residual", tol.ode_residual_rel);
    for _ in 0..n {
        let p = geodesic_params(s);
        let time = regular_time(s, &p);
        let r = match (
            projective::geodesic_state(&p, time),
            projective::geodesic_acceleration(&p, time),
        ) {
            (Ok(state), Ok(acc)) => {
                let rhs = projective::geodesic_ode_rhs(&state);
                let r1 = (acc[0] - rhs[2]).abs() / acc[0].abs().max(rhs[2].abs()).max(1.0);
                let r2 = (acc[1] - rhs[3]).abs() / acc[1].abs().max(rhs[3].abs()).max(1.0);
                r1.max(r2)
            }
            _ => f64::INFINITY,
        };
        t.record(r, || format!("p={p:?} t={time}"));
    }
    t.finish()
}

fn geodesic_graph_form(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("geodesic.graph_form", tol.ode_abs);
    for _ in 0..n {
        let p = geodesic_params(s);
        let point = |time: f64| projective::geodesic_closed_form(&p, time);
        // two well-separated, non-conjugate samples for the fit
        let (pa, pb) = loop {
            let (ta, tb) = (regular_time(s, &p), regular_time(s, &p));
            if let (Ok(a), Ok(b)) = (point(ta), point(tb)) {
                if (a.x1 - b.x1).abs() > 0.1 && (1.0 + a.x1 * b.x1).abs() > 0.1 {
                    break (a, b);
                }
            }
        };
        let mut worst = match projective::geodesic_through(pa, pb) {
            Ok(g) => (0..50)
                .map(|_| {
                    let time = regular_time(s, &p);
                    match point(time) {
                        Ok(c) => g.residual(c) / c.x2.abs().max(1.0),
                        Err(_) => f64::INFINITY,
                    }
                })
                .fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        // the closed-form elimination must name the same curve
        if let (Some(fit_a), Some(fit_b)) = (
            projective::geodesic_through(pa, pb)
                .ok()
                .and_then(|g| g.eval(0.0)),
            p.graph().eval(0.0),
        ) {
            worst = worst.max((fit_a - fit_b).abs() / fit_a.abs().max(1.0));
        }
        t.record(worst, || format!("p={p:?}"));
    }
    t.finish()
}

fn geodesic_rk4_agreement(s: &mut Sampler, n: usize, tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("geodesic.rk4_agreement", tol.ode_abs);
    for _ in 0..n.min(200) {
        let p = GeodesicParams {
            omega: s.uniform(0.2, 1.0),
            phase: s.uniform(-0.3, 0.3),
            a: s.uniform(-2.0, 2.0),
            b: s.uniform(-2.0, 2.0),
        };
        let r = projective::geodesic_state(&p, 0.0)
            .and_then(|y0| projective::integrate_geodesic(y0, 0.0, 1.0, 1000))
            .map(|traj| {
                traj.iter()
                    .map(
                        |(time, y)| match projective::geodesic_closed_form(&p, *time) {
                            Ok(c) => (y[0] - c.x1).abs().max((y[1] - c.x2).abs()),
                            Err(_) => f64::INFINITY,
                        },
                    )
                    .fold(0.0, f64::max)
            })
            .unwrap_or(f64::INFINITY);
        t.record(r, || format!("p={p:?}"));
    }
    t.finish()
}

fn geodesic_vertical(s: &mut Sampler, n: usize, _tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("geodesic.vertical", 0.0);
    for _ in 0..n {
        let (x1, x2, v2) = (
            s.uniform(-10.0, 10.0),
            s.uniform(-10.0, 10.0),
            s.uniform(-5.0, 5.0),
        );
        let rhs = projective::geodesic_ode_rhs(&[x1, x2, 0.0, v2]);
        let r = rhs[0]
            .abs()
            .max(rhs[2].abs())
            .max(rhs[3].abs())
            .max((rhs[1] - v2).abs());
        t.record(r, || format!("x1={x1} x2={x2} v2={v2}"));
    }
    t.finish()
}

// ----------------------------------------------------------------- numerics

/// Inverse error ratio of RK4 on `y' = y` under step halving; order four gives
/// about `1/16`.
fn numerics_rk4_order(_: &mut Sampler, _: usize, _tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("numerics.rk4_order", 1.0 / 12.0);
    let err = |steps: usize| {
        rk4(|y: &[f64; 1]| [y[0]], [1.0], 0.0, 1.0, steps)
            .map(|tr| (tr.last().unwrap().1[0] - std::f64::consts::E).abs())
            .unwrap_or(f64::INFINITY)
    };
    for steps in [8, 16, 32, 64] {
        t.record(err(2 * steps) / err(steps), || format!("steps={steps}"));
    }
    t.finish()
}

/// Central-difference error over the bound `1.1 |f'''| h^2 / 6`.
fn numerics_fd_order(_: &mut Sampler, _: usize, _tol: &Tolerances) -> SuiteReport {
    let mut t = Tracker::new("numerics.fd_order", 1.0);
    type Case = (
        &'static str,
        fn(f64) -> f64,
        fn(f64) -> f64,
        fn(f64) -> f64,
        f64,
    );
    let cases: [Case; 3] = [
        ("sin", f64::sin, f64::cos, |x| -x.cos(), 0.7),
        ("exp", f64::exp, f64::exp, f64::exp, 0.5),
        (
            "log_volume",
            |x| (1.0 / (1.0 + x * x).powi(2)).ln(),
            |x| -4.0 * x / (1.0 + x * x),
            |x| 8.0 * x * (x * x - 3.0) / (1.0 + x * x).powi(3),
            1.0,
        ),
    ];
    for (name, f, df, d3f, x) in cases {
        for h in [1e-2, 1e-3] {
            let err = (central_diff_scalar(f, x, h) - df(x)).abs();
            let bound = 1.1 * d3f(x).abs() / 6.0 * h * h;
            t.record(err / bound, || format!("{name} x={x} h={h}"));
        }
    }
    t.finish()
}
