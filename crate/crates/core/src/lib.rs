//! Computational kernel for the 3-dimensional unital associative algebra
//! spanned by `{1, e1, e2}` with `e1^2 = 1`, `e2^2 = 0`, `e1 e2 = -e2 e1 = e2`,
//! the degenerate pseudo-Euclidean space it carries, and two models of its
//! unit sphere:
//!
//! * [`algebra`]: products, conjugation, the degenerate form, inverses and
//!   the upper-triangular matrix representation.
//! * [`motions`]: rotations, anti-rotations, reflections and the affine
//!   isometry family.
//! * [`bundle`]: the principal bundle over the line with structure group the
//!   invertible double numbers, adapted coordinates and the unit sphere.
//! * [`conformal`]: stereographic projection of the sphere to the plane.
//! * [`projective`]: the projective model with its induced metric,
//!   connection, curvature and geodesics.
//! * [`numerics`] and [`verify`]: finite differences, RK4, a seeded sampler
//!   and the property suites that check all of the above.

pub mod algebra;
pub mod bundle;
pub mod conformal;
mod error;
pub mod motions;
pub mod numerics;
pub mod projective;
pub mod verify;

pub use algebra::{AlgebraElement, TriMatrix};
pub use error::{Error, Result};
