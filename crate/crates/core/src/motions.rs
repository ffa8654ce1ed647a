//! Isometries of the degenerate pseudo-Euclidean space.
//!
//! Proper motions are `x ↦ a x b` and improper motions `x ↦ a conj(x) b` with
//! `|a|^2, |b|^2 ∈ {+1, -1}`. A reflection in the plane orthogonal to a unit
//! vector `n` is `x ↦ -n conj(x) n`; an even number of reflections composes
//! to a proper motion and an odd number to an improper one. Multiplication
//! by an element of norm square `-1` (an anti-rotation) exchanges vectors of
//! positive and negative norm square.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};

/// Tolerance on `||a|^2| = 1` for motion parameters.
pub const UNIT_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(v: f64) -> Self {
        if v >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Connected component of the group of invertible elements, given by the
/// signs of `x0 + x1` and `x0 - x1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentTag {
    pub sign_plus: Sign,
    pub sign_minus: Sign,
}

pub fn classify_component(x: AlgebraElement) -> Result<ComponentTag> {
    if !x.is_invertible() {
        return Err(Error::NotInvertible {
            norm_sq: x.norm_sq(),
        });
    }
    Ok(ComponentTag {
        sign_plus: Sign::of(x.x0() + x.x1()),
        sign_minus: Sign::of(x.x0() - x.x1()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationKind {
    /// `|a|^2 = 1`
    Rotation,
    /// `|a|^2 = -1`
    Anti,
}

/// `cosh φ ± sinh φ e1 + u sinh φ e2` for rotations, and
/// `sinh φ ± cosh φ e1 + u cosh φ e2` for anti-rotations.
pub fn rotation_element(phi: f64, branch: Sign, u: f64, kind: RotationKind) -> AlgebraElement {
    let (ch, sh) = (phi.cosh(), phi.sinh());
    let s = branch.value();
    match kind {
        RotationKind::Rotation => AlgebraElement::raw(ch, s * sh, u * sh),
        RotationKind::Anti => AlgebraElement::raw(sh, s * ch, u * ch),
    }
}

fn check_unit(a: AlgebraElement) -> Result<()> {
    let n = a.norm_sq();
    if (n.abs() - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm { norm_sq: n });
    }
    Ok(())
}

/// `x ↦ a x b`.
pub fn proper_motion(
    a: AlgebraElement,
    b: AlgebraElement,
    x: AlgebraElement,
) -> Result<AlgebraElement> {
    check_unit(a)?;
    check_unit(b)?;
    Ok(a * x * b)
}

/// `x ↦ a conj(x) b`.
pub fn improper_motion(
    a: AlgebraElement,
    b: AlgebraElement,
    x: AlgebraElement,
) -> Result<AlgebraElement> {
    proper_motion(a, b, x.conj())
}

/// Reflection `x ↦ -n conj(x) n` in the plane orthogonal to `n`.
pub fn reflect(n: AlgebraElement, x: AlgebraElement) -> Result<AlgebraElement> {
    check_unit(n)?;
    Ok(-(n * x.conj() * n))
}

/// Parameters of the affine isometry family
///
/// ```text
/// x0' = x0 cosh φ + x1 sinh φ + a0
/// x1' = x1 cosh φ + x0 sinh φ + a1
/// x2' = u0 x0 + u1 x1 + u2 x2 + a2
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryParams {
    pub phi: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
}

impl IsometryParams {
    pub const IDENTITY: Self = Self {
        phi: 0.0,
        a0: 0.0,
        a1: 0.0,
        a2: 0.0,
        u0: 0.0,
        u1: 0.0,
        u2: 1.0,
    };

    pub fn translation(a0: f64, a1: f64, a2: f64) -> Self {
        Self {
            a0,
            a1,
            a2,
            ..Self::IDENTITY
        }
    }
}

pub fn apply_isometry(p: &IsometryParams, x: AlgebraElement) -> Result<AlgebraElement> {
    if p.u2 == 0.0 {
        return Err(Error::DegenerateIsometry);
    }
    let (ch, sh) = (p.phi.cosh(), p.phi.sinh());
    Ok(AlgebraElement::raw(
        x.x0() * ch + x.x1() * sh + p.a0,
        x.x1() * ch + x.x0() * sh + p.a1,
        p.u0 * x.x0() + p.u1 * x.x1() + p.u2 * x.x2() + p.a2,
    ))
}

/// Which hyperbolic function the angle is read through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AngleBranch {
    /// Rotations: `cosh φ = (x, ax) / (|x| |ax|)`.
    #[default]
    Cosh,
    /// Anti-rotations: `sinh φ` of the same quotient, with moduli taken as
    /// `sqrt(||x|^2|)`.
    Sinh,
}

/// Hyperbolic angle between `x` and `a x`. It equals the angle of `a` and does
/// not depend on `x`. The cosh branch returns `|φ|`.
pub fn angle_between(x: AlgebraElement, a: AlgebraElement, branch: AngleBranch) -> Result<f64> {
    let nx = x.norm_sq();
    if nx <= 0.0 {
        return Err(Error::NullVector { norm_sq: nx });
    }
    let na = a.norm_sq();
    let expected = match branch {
        AngleBranch::Cosh => 1.0,
        AngleBranch::Sinh => -1.0,
    };
    if (na - expected).abs() > UNIT_NORM_TOL {
        return Err(Error::NotUnitNorm { norm_sq: na });
    }
    let ax = a * x;
    let q = x.bilinear(ax) / (nx.sqrt() * ax.norm_sq().abs().sqrt());
    match branch {
        AngleBranch::Cosh => {
            if q < 1.0 - UNIT_NORM_TOL {
                return Err(Error::AngleUndefined { quotient: q });
            }
            Ok(q.max(1.0).acosh())
        }
        AngleBranch::Sinh => Ok(q.asinh()),
    }
}
