//! The Hopf map `S³ → S²` and its fibers.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{HopfError, Result};
use crate::quat::{exp_i, Quaternion, UnitQuaternion};
use crate::rotation::{rotations_taking_x_to, Point3};

/// A point of S³ ⊂ ℝ⁴, `(w, x, y, z) = (a, b, c, d)` of the unit quaternion.
pub type PointS3 = UnitQuaternion;

/// A point of the unit 2-sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 3]")]
pub struct PointS2 {
    p1: f64,
    p2: f64,
    p3: f64,
}

impl PointS2 {
    /// Renormalizes inputs within [`Tolerances::normalize`] of the sphere and
    /// rejects the rest.
    pub fn new(p1: f64, p2: f64, p3: f64) -> Result<Self> {
        let tol = Tolerances::global();
        let v = Point3::new(p1, p2, p3);
        let n = v.norm();
        if !v.is_finite() || (n - 1.0).abs() > tol.normalize {
            return Err(HopfError::domain(format!(
                "point {v} is not on the unit sphere (norm {n}, tolerance {:e})",
                tol.normalize
            )));
        }
        Ok(Self::new_unchecked(p1 / n, p2 / n, p3 / n))
    }

    /// Projects any nonzero vector radially onto the sphere.
    pub fn from_direction(v: Point3) -> Result<Self> {
        let u = v
            .is_finite()
            .then(|| v.normalized())
            .flatten()
            .ok_or_else(|| HopfError::domain(format!("cannot normalize {v} onto S²")))?;
        Ok(Self::new_unchecked(u.x, u.y, u.z))
    }

    pub(crate) const fn new_unchecked(p1: f64, p2: f64, p3: f64) -> Self {
        Self { p1, p2, p3 }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn to_point3(self) -> Point3 {
        Point3::new(self.p1, self.p2, self.p3)
    }

    pub fn distance(&self, other: &PointS2) -> f64 {
        self.to_point3().distance(&other.to_point3())
    }
}

impl fmt::Display for PointS2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.p1, self.p2, self.p3)
    }
}

impl From<PointS2> for [f64; 3] {
    fn from(p: PointS2) -> Self {
        p.to_array()
    }
}

impl<'de> Deserialize<'de> for PointS2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [p1, p2, p3] = <[f64; 3]>::deserialize(d)?;
        PointS2::new(p1, p2, p3).map_err(serde::de::Error::custom)
    }
}

/// The three coordinates `(a²+b²−c²−d², 2(ad+bc), 2(bd−ac))` for any
/// quaternion, unit or not.
pub fn hopf_components(q: Quaternion) -> [f64; 3] {
    let Quaternion { a, b, c, d } = q;
    [
        a * a + b * b - c * c - d * d,
        2.0 * (a * d + b * c),
        2.0 * (b * d - a * c),
    ]
}

pub fn hopf(q: PointS3) -> PointS2 {
    let [p1, p2, p3] = hopf_components(q.quaternion());
    PointS2::new_unchecked(p1, p2, p3)
}

/// [`hopf`] on a raw quaternion, checking that it lies on S³.
pub fn hopf_checked(q: Quaternion) -> Result<PointS2> {
    Ok(hopf(PointS3::new(q)?))
}

/// The quaternion form: the vector part of `r i r̄`, i.e. `R_r(1,0,0)`.
pub fn hopf_quat(r: UnitQuaternion) -> PointS2 {
    let q = r.quaternion();
    let [p1, p2, p3] = (q * Quaternion::I * q.conj()).vector_part();
    PointS2::new_unchecked(p1, p2, p3)
}

/// Hopf's original coordinate ordering `(2(ac+bd), 2(bc−ad), a²+b²−c²−d²)`.
pub fn hopf_original(q: PointS3) -> PointS2 {
    let Quaternion { a, b, c, d } = q.quaternion();
    PointS2::new_unchecked(
        2.0 * (a * c + b * d),
        2.0 * (b * c - a * d),
        a * a + b * b - c * c - d * d,
    )
}

/// Requested gauge for [`fiber`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaugeKind {
    #[default]
    R1,
    R2,
    /// `r1`, or `k` at the antipode `(-1,0,0)`.
    Auto,
}

impl std::str::FromStr for GaugeKind {
    type Err = HopfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r1" => Ok(GaugeKind::R1),
            "r2" => Ok(GaugeKind::R2),
            "auto" => Ok(GaugeKind::Auto),
            other => Err(HopfError::Parse(format!(
                "unknown gauge `{other}` (expected r1, r2 or auto)"
            ))),
        }
    }
}

/// Gauge actually used to parametrize a fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberGauge {
    #[serde(rename = "r1")]
    R1,
    #[serde(rename = "r2")]
    R2,
    #[serde(rename = "k-special")]
    KSpecial,
}

impl FiberGauge {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiberGauge::R1 => "r1",
            FiberGauge::R2 => "r2",
            FiberGauge::KSpecial => "k-special",
        }
    }
}

/// Samples of the fiber `{gauge · e^{it}}` over `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberSamples {
    pub base: PointS2,
    pub gauge: UnitQuaternion,
    pub gauge_kind: FiberGauge,
    pub t_values: Vec<f64>,
    pub points: Vec<PointS3>,
}

impl FiberSamples {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The fiber point at an arbitrary parameter value.
    pub fn point_at(&self, t: f64) -> PointS3 {
        self.gauge * exp_i(t)
    }
}

/// Minimum number of samples accepted by [`fiber`].
pub const MIN_FIBER_SAMPLES: usize = 3;

/// Default sample count for documents.
pub const DEFAULT_FIBER_SAMPLES: usize = 256;

/// Closed-form fiber over `base`, sampled at `t = 2πn/N`.
pub fn fiber(base: PointS2, gauge_kind: GaugeKind, n_samples: usize) -> Result<FiberSamples> {
    if n_samples < MIN_FIBER_SAMPLES {
        return Err(HopfError::domain(format!(
            "fiber needs at least {MIN_FIBER_SAMPLES} samples, got {n_samples}"
        )));
    }
    let tol = Tolerances::global();
    let near_antipode = 1.0 + base.p1() <= tol.antipode;
    let (gauge, kind) = match gauge_kind {
        GaugeKind::Auto if near_antipode => (UnitQuaternion::K, FiberGauge::KSpecial),
        GaugeKind::R1 | GaugeKind::Auto => (rotations_taking_x_to(base)?.0, FiberGauge::R1),
        GaugeKind::R2 => (rotations_taking_x_to(base)?.1, FiberGauge::R2),
    };
    let t_values: Vec<f64> = (0..n_samples)
        .map(|n| TAU * n as f64 / n_samples as f64)
        .collect();
    let points = t_values.iter().map(|&t| gauge * exp_i(t)).collect();
    Ok(FiberSamples {
        base,
        gauge,
        gauge_kind: kind,
        t_values,
        points,
    })
}

/// A gauge over `base` that stays well conditioned on the whole sphere:
/// `r1(P)` on the half `p₁ ≥ 0`, otherwise `k · r1(P')` with
/// `P' = R_k⁻¹(P) = (-p₁, -p₂, p₃)`.
pub(crate) fn stable_gauge(base: PointS2) -> UnitQuaternion {
    let [p1, p2, p3] = base.to_array();
    if p1 >= 0.0 {
        r1_unchecked(p1, p2, p3)
    } else {
        UnitQuaternion::K * r1_unchecked(-p1, -p2, p3)
    }
}

fn r1_unchecked(p1: f64, p2: f64, p3: f64) -> UnitQuaternion {
    let q = Quaternion::new(0.0, 1.0 + p1, p2, p3);
    UnitQuaternion::new_unchecked(q.scale(1.0 / q.norm()))
}
