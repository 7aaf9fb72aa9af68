//! Quaternion algebra over `f64`.
//!
//! A quaternion `(a, b, c, d)` stands for `a + bi + cj + dk` with
//! `i² = j² = k² = -1`, `ij = k`, `jk = i`, `ki = j` and the reversed
//! products negated.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{HopfError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    /// Real part.
    pub a: f64,
    /// `i` part.
    pub b: f64,
    /// `j` part.
    pub c: f64,
    /// `k` part.
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    /// Like [`Quaternion::new`] but rejects NaN and infinite components.
    pub fn try_new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let q = Self::new(a, b, c, d);
        if q.is_finite() {
            Ok(q)
        } else {
            Err(HopfError::domain(format!("quaternion {q} has non-finite components")))
        }
    }

    /// The pure quaternion `xi + yj + zk`.
    pub const fn pure(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// `(i, j, k)` parts.
    pub fn vector_part(&self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    /// Euclidean length in ℝ⁴.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub(crate) fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// `conj(q) / ‖q‖²`.
    pub fn inv(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(HopfError::domain("the zero quaternion has no inverse"));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    /// Euclidean distance in ℝ⁴.
    pub fn distance(&self, other: &Quaternion) -> f64 {
        (*self - *other).norm()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    fn add(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a + q.a, self.b + q.b, self.c + q.c, self.d + q.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    fn sub(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a - q.a, self.b - q.b, self.c - q.c, self.d - q.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Quaternion product as a free function.
pub fn mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// A quaternion of norm 1 (within [`Tolerances::unit_norm`]); a point of S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 4]")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    /// Accepts `q` if its norm is within [`Tolerances::normalize`] of 1,
    /// renormalizing it; rejects anything further off.
    pub fn new(q: Quaternion) -> Result<Self> {
        Self::with_tolerances(q, Tolerances::global())
    }

    pub fn with_tolerances(q: Quaternion, tol: &Tolerances) -> Result<Self> {
        if !q.is_finite() {
            return Err(HopfError::domain(format!("quaternion {q} has non-finite components")));
        }
        let n = q.norm();
        if (n - 1.0).abs() > tol.normalize {
            return Err(HopfError::domain(format!(
                "quaternion {q} has norm {n}, not 1 within {:e}",
                tol.normalize
            )));
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    /// Scales any nonzero finite quaternion onto S³.
    pub fn normalize(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if !q.is_finite() || n == 0.0 || !n.is_finite() {
            return Err(HopfError::domain(format!("cannot normalize quaternion {q}")));
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    /// Wraps a quaternion the caller knows is unit up to rounding.
    pub(crate) const fn new_unchecked(q: Quaternion) -> Self {
        Self(q)
    }

    pub fn quaternion(&self) -> Quaternion {
        self.0
    }

    /// Equal to the conjugate for unit quaternions.
    pub fn inverse(&self) -> Self {
        Self(self.0.conj())
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Self {
        u.0
    }
}

impl From<UnitQuaternion> for [f64; 4] {
    fn from(u: UnitQuaternion) -> Self {
        u.0.to_array()
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * rhs.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;

    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

/// `e^{it} = cos t + i sin t`.
pub fn exp_i(t: f64) -> UnitQuaternion {
    let (s, c) = t.sin_cos();
    UnitQuaternion(Quaternion::new(c, s, 0.0, 0.0))
}
