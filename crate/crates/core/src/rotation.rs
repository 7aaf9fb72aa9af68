//! Rotations of ℝ³ encoded by quaternions: `R_r(p) = r p r⁻¹`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{HopfError, Result};
use crate::hopf::PointS2;
use crate::quat::{Quaternion, UnitQuaternion};

/// A point (or vector) of ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);
    pub const X: Point3 = Point3::new(1.0, 0.0, 0.0);
    pub const Y: Point3 = Point3::new(0.0, 1.0, 0.0);
    pub const Z: Point3 = Point3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, o: &Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, o: &Point3) -> f64 {
        (*self - *o).norm()
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    /// Flips the vector so its first component with magnitude above `eps`
    /// is positive.
    pub fn canonical_sign(self, eps: f64) -> Point3 {
        let lead = self.to_array().into_iter().find(|c| c.abs() > eps).unwrap_or(0.0);
        if lead < 0.0 {
            -self
        } else {
            self
        }
    }

    pub(crate) fn as_pure(&self) -> Quaternion {
        Quaternion::pure(self.x, self.y, self.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(v: [f64; 3]) -> Self {
        Point3::new(v[0], v[1], v[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation by `angle` radians about the unit vector `axis`, counterclockwise
/// when viewed from the tip of `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisAngle {
    pub axis: Point3,
    pub angle: f64,
}

impl AxisAngle {
    /// `axis` must be unit within [`Tolerances::normalize`]; it is renormalized.
    pub fn new(axis: Point3, angle: f64) -> Result<Self> {
        let tol = Tolerances::global();
        let n = axis.norm();
        if !axis.is_finite() || !angle.is_finite() || (n - 1.0).abs() > tol.normalize {
            return Err(HopfError::domain(format!(
                "axis {axis} must be a finite unit vector (norm {n})"
            )));
        }
        Ok(Self { axis: axis * (1.0 / n), angle })
    }

    /// Accepts any nonzero axis vector.
    pub fn from_vector(axis: Point3, angle: f64) -> Result<Self> {
        let unit = axis
            .is_finite()
            .then(|| axis.normalized())
            .flatten()
            .ok_or_else(|| HopfError::domain(format!("axis {axis} must be nonzero and finite")))?;
        Self::new(unit, angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RotationClass {
    /// `r = ±1`; no axis.
    Identity,
    Rotation(AxisAngle),
}

/// Applies `R_r` to `p`: the vector part of `r p r⁻¹`.
pub fn rotate(r: Quaternion, p: Point3) -> Result<Point3> {
    let r_inv = r.inv().map_err(|e| e.context("rotation by the zero quaternion"))?;
    let out = r * p.as_pure() * r_inv;
    let [x, y, z] = out.vector_part();
    Ok(Point3::new(x, y, z))
}

impl UnitQuaternion {
    /// `R_r(p)` using the conjugate as inverse.
    pub fn rotate(&self, p: Point3) -> Point3 {
        let r = self.quaternion();
        let [x, y, z] = (r * p.as_pure() * r.conj()).vector_part();
        Point3::new(x, y, z)
    }
}

/// Axis and angle of `R_r`, with the angle in `(0, 2π)`.
pub fn to_axis_angle(r: UnitQuaternion) -> RotationClass {
    let tol = Tolerances::global();
    let q = r.quaternion();
    if (q.a.abs() - 1.0).abs() <= tol.unit_norm {
        return RotationClass::Identity;
    }
    let v = Point3::new(q.b, q.c, q.d);
    match v.normalized() {
        Some(axis) => RotationClass::Rotation(AxisAngle {
            axis,
            angle: 2.0 * q.a.clamp(-1.0, 1.0).acos(),
        }),
        None => RotationClass::Identity,
    }
}

/// `(cos(θ/2), sin(θ/2)·axis)`.
pub fn from_axis_angle(aa: AxisAngle) -> UnitQuaternion {
    let (s, c) = (aa.angle / 2.0).sin_cos();
    UnitQuaternion::new_unchecked(Quaternion::new(c, s * aa.axis.x, s * aa.axis.y, s * aa.axis.z))
}

/// Reduces an axis/angle pair to the canonical `(0, 2π)` form produced by
/// [`to_axis_angle`].
pub fn canonicalize(aa: AxisAngle) -> RotationClass {
    let angle = aa.angle.rem_euclid(2.0 * TAU);
    // θ and θ + 4π give the same quaternion; θ ∈ (2π, 4π) is -r, which
    // extracts to the same rotation with angle 4π - θ about -axis.
    let (axis, angle) = if angle > TAU {
        (-aa.axis, 2.0 * TAU - angle)
    } else {
        (aa.axis, angle)
    };
    if angle == 0.0 || angle == TAU {
        RotationClass::Identity
    } else {
        RotationClass::Rotation(AxisAngle { axis, angle })
    }
}

/// Rotation matrix of `R_r`, row-major. Column `i` is `R_r(eᵢ)`.
pub fn to_matrix(r: UnitQuaternion) -> [[f64; 3]; 3] {
    let Quaternion { a, b, c, d } = r.quaternion();
    [
        [
            a * a + b * b - c * c - d * d,
            2.0 * (b * c - a * d),
            2.0 * (b * d + a * c),
        ],
        [
            2.0 * (b * c + a * d),
            a * a - b * b + c * c - d * d,
            2.0 * (c * d - a * b),
        ],
        [
            2.0 * (b * d - a * c),
            2.0 * (c * d + a * b),
            a * a - b * b - c * c + d * d,
        ],
    ]
}

pub fn mat_vec(m: &[[f64; 3]; 3], p: Point3) -> Point3 {
    let row = |i: usize| m[i][0] * p.x + m[i][1] * p.y + m[i][2] * p.z;
    Point3::new(row(0), row(1), row(2))
}

/// The two rotations taking `(1,0,0)` to `P`: `r1` has angle π about the
/// midpoint axis, `r2` has its axis perpendicular to both points.
pub fn rotations_taking_x_to(p: PointS2) -> Result<(UnitQuaternion, UnitQuaternion)> {
    let tol = Tolerances::global();
    let [p1, p2, p3] = p.to_array();
    let s = 1.0 + p1;
    if s <= tol.antipode {
        return Err(HopfError::domain(format!(
            "P = {p} is within {:e} of (-1,0,0); use the k gauge there",
            tol.antipode
        )));
    }
    // Both vectors have norm √(2(1+p₁)) on the sphere; normalizing directly
    // avoids the cancellation in 1 + p₁ for points near the antipode.
    let r1 = UnitQuaternion::normalize(Quaternion::new(0.0, s, p2, p3))?;
    let r2 = UnitQuaternion::normalize(Quaternion::new(s, 0.0, -p3, p2))?;
    Ok((r1, r2))
}
