//! Arithmetic of the 3-dimensional algebra with basis `{1, e1, e2}` and
//! multiplication table
//!
//! ```text
//! e1 * e1 = 1,   e2 * e2 = 0,   e1 * e2 = -e2 * e1 = e2.
//! ```
//!
//! The algebra is unital, associative and non-commutative. It is faithfully
//! represented by real upper-triangular 2x2 matrices via
//! `x0 + x1 e1 + x2 e2 ↦ [[x0 + x1, x2], [0, x0 - x1]]`, and carries the
//! degenerate form `(x, y) = x0 y0 - x1 y1` of signature `(+, -, 0)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute threshold on `|x|^2` below which an element is treated as
/// lying on one of the two null planes `x0 = ±x1`.
pub const INVERTIBILITY_EPS: f64 = 1e-12;

/// An element `x0 + x1 e1 + x2 e2`. Components are always finite when built
/// through [`AlgebraElement::new`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct AlgebraElement {
    x0: f64,
    x1: f64,
    x2: f64,
}

impl AlgebraElement {
    pub const ZERO: Self = Self::raw(0.0, 0.0, 0.0);
    pub const ONE: Self = Self::raw(1.0, 0.0, 0.0);
    pub const E1: Self = Self::raw(0.0, 1.0, 0.0);
    pub const E2: Self = Self::raw(0.0, 0.0, 1.0);

    pub fn new(x0: f64, x1: f64, x2: f64) -> Result<Self> {
        if x0.is_finite() && x1.is_finite() && x2.is_finite() {
            Ok(Self::raw(x0, x1, x2))
        } else {
            Err(Error::NonFinite("AlgebraElement"))
        }
    }

    pub(crate) const fn raw(x0: f64, x1: f64, x2: f64) -> Self {
        Self { x0, x1, x2 }
    }

    #[inline]
    pub fn x0(&self) -> f64 {
        self.x0
    }

    #[inline]
    pub fn x1(&self) -> f64 {
        self.x1
    }

    #[inline]
    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x0, self.x1, self.x2]
    }

    /// Conjugation `x0 + x1 e1 + x2 e2 ↦ x0 - x1 e1 - x2 e2`.
    /// Reverses products: `conj(xy) = conj(y) conj(x)`.
    pub fn conj(self) -> Self {
        Self::raw(self.x0, -self.x1, -self.x2)
    }

    /// The degenerate scalar product `x0 y0 - x1 y1`.
    pub fn bilinear(self, other: Self) -> f64 {
        self.x0 * other.x0 - self.x1 * other.x1
    }

    /// `|x|^2 = x0^2 - x1^2`.
    pub fn norm_sq(self) -> f64 {
        self.bilinear(self)
    }

    pub fn is_invertible(self) -> bool {
        self.norm_sq().abs() > INVERTIBILITY_EPS
    }

    pub fn inverse(self) -> Result<Self> {
        self.inverse_with(INVERTIBILITY_EPS)
    }

    /// Inverse `conj(x) / |x|^2`, rejecting elements with `||x|^2| <= eps`.
    pub fn inverse_with(self, eps: f64) -> Result<Self> {
        let n = self.norm_sq();
        if n.abs() <= eps {
            return Err(Error::NotInvertible { norm_sq: n });
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::raw(self.x0 * s, self.x1 * s, self.x2 * s)
    }

    pub fn to_matrix(self) -> TriMatrix {
        TriMatrix {
            a: self.x0 + self.x1,
            b: self.x0 - self.x1,
            c: self.x2,
        }
    }

    pub fn from_matrix(m: TriMatrix) -> Self {
        Self::raw(0.5 * (m.a + m.b), 0.5 * (m.a - m.b), m.c)
    }

    /// Max-norm of the component vector.
    pub fn max_abs(self) -> f64 {
        self.x0.abs().max(self.x1.abs()).max(self.x2.abs())
    }

    /// Max-norm distance to `other`.
    pub fn dist_max(self, other: Self) -> f64 {
        (self - other).max_abs()
    }
}

impl TryFrom<[f64; 3]> for AlgebraElement {
    type Error = Error;

    fn try_from(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<AlgebraElement> for [f64; 3] {
    fn from(x: AlgebraElement) -> Self {
        x.to_array()
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {} e1 + {} e2", self.x0, self.x1, self.x2)
    }
}

impl Mul for AlgebraElement {
    type Output = Self;

    fn mul(self, y: Self) -> Self {
        let x = self;
        Self::raw(
            x.x0 * y.x0 + x.x1 * y.x1,
            x.x0 * y.x1 + x.x1 * y.x0,
            (x.x0 + x.x1) * y.x2 + (y.x0 - y.x1) * x.x2,
        )
    }
}

impl Mul<f64> for AlgebraElement {
    type Output = Self;

    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Add for AlgebraElement {
    type Output = Self;

    fn add(self, y: Self) -> Self {
        Self::raw(self.x0 + y.x0, self.x1 + y.x1, self.x2 + y.x2)
    }
}

impl Sub for AlgebraElement {
    type Output = Self;

    fn sub(self, y: Self) -> Self {
        Self::raw(self.x0 - y.x0, self.x1 - y.x1, self.x2 - y.x2)
    }
}

impl Neg for AlgebraElement {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Upper-triangular matrix `[[a, c], [0, b]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriMatrix {
    pub const IDENTITY: Self = Self {
        a: 1.0,
        b: 1.0,
        c: 0.0,
    };

    pub fn det(self) -> f64 {
        self.a * self.b
    }
}

impl Mul for TriMatrix {
    type Output = Self;

    fn mul(self, m: Self) -> Self {
        Self {
            a: self.a * m.a,
            b: self.b * m.b,
            c: self.a * m.c + self.c * m.b,
        }
    }
}

pub fn mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement {
    x * y
}

pub fn conj(x: AlgebraElement) -> AlgebraElement {
    x.conj()
}

pub fn bilinear(x: AlgebraElement, y: AlgebraElement) -> f64 {
    x.bilinear(y)
}

pub fn norm_sq(x: AlgebraElement) -> f64 {
    x.norm_sq()
}

pub fn inverse(x: AlgebraElement) -> Result<AlgebraElement> {
    x.inverse()
}

pub fn to_matrix(x: AlgebraElement) -> TriMatrix {
    x.to_matrix()
}

pub fn from_matrix(m: TriMatrix) -> AlgebraElement {
    AlgebraElement::from_matrix(m)
}
