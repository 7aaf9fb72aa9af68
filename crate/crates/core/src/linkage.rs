//! Linkage of projected Hopf fibers.
//!
//! Three routes are available: the crossing criterion against the unit
//! circle in the y,z-plane ([`axis_link_report`]), the map
//! `ψ = s ∘ (x ↦ k r⁻¹ x) ∘ s⁻¹` that carries any fiber pair onto that
//! configuration ([`psi`], [`pairwise_link_check`]), and the Gauss linking
//! number of two closed polylines ([`gauss_linking`]).

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::config::Tolerances;
use crate::error::{HopfError, Result};
use crate::hopf::{hopf, stable_gauge, PointS2, PointS3};
use crate::quat::{exp_i, Quaternion, UnitQuaternion};
use crate::rotation::Point3;
use crate::stereo::{fit_circle_or_line, proj_s3, unproj_s3, CircleOrLine3};

/// Minimum vertex count of each curve handed to [`gauss_linking`].
pub const MIN_LINK_VERTICES: usize = 32;

/// Where a projected fiber meets the y,z-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkReport {
    pub base: PointS2,
    /// Crossing inside the unit circle.
    #[serde(rename = "A")]
    pub inside: Point3,
    /// Crossing outside the unit circle.
    #[serde(rename = "B")]
    pub outside: Point3,
    pub t_inside: f64,
    pub t_outside: f64,
    pub dist_inside: f64,
    pub dist_outside: f64,
    /// Unit direction of the line through both crossings, pointing from the
    /// outside crossing towards the inside one.
    pub line_direction: Point3,
    /// Gauss linking number against the unit circle in the y,z-plane.
    pub gauss: f64,
    pub linked: bool,
}

/// The ψ-image of the second fiber of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformedLink {
    /// A projected circle, checked against the unit circle.
    Circle(LinkReport),
    /// The x-axis, which meets the y,z-plane at the origin inside the unit
    /// circle. Happens for antipodal base points.
    AxisLine,
}

impl TransformedLink {
    pub fn linked(&self) -> bool {
        match self {
            TransformedLink::Circle(r) => r.linked,
            TransformedLink::AxisLine => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairLinkReport {
    pub base_a: PointS2,
    pub base_b: PointS2,
    /// Base point of the ψ-image of the second fiber.
    pub transformed_base: PointS2,
    pub transformed_report: TransformedLink,
    /// Largest distance of a ψ-mapped sample of the first fiber from the unit
    /// circle in the y,z-plane.
    pub psi_circle_deviation: f64,
    pub gauss_direct: f64,
    /// `|gauss_direct|` rounds to 1.
    pub linked: bool,
    /// The ψ-transformed crossing verdict matches `linked`.
    pub verdicts_agree: bool,
}

fn check_link_samples(n_samples: usize) -> Result<()> {
    if n_samples < MIN_LINK_VERTICES {
        return Err(HopfError::domain(format!(
            "link checks need at least {MIN_LINK_VERTICES} samples, got {n_samples}"
        )));
    }
    Ok(())
}

fn uniform_t(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| TAU * k as f64 / n as f64)
}

/// Samples of the unit circle `(0, sin t, cos t)` in the y,z-plane, the
/// projection of the fiber over `(-1,0,0)`.
pub fn unit_yz_circle(n: usize) -> Vec<Point3> {
    uniform_t(n)
        .map(|t| Point3::new(0.0, t.sin(), t.cos()))
        .collect()
}

/// Projected samples of the fiber through `gauge`, leaving out samples
/// within [`Tolerances::pole_exclusion`] of the S³ pole.
pub(crate) fn projected_samples(gauge: UnitQuaternion, n: usize) -> Vec<Point3> {
    let tol = Tolerances::global();
    uniform_t(n)
        .map(|t| gauge * exp_i(t))
        .filter(|q| q.quaternion().distance(&Quaternion::ONE) > tol.pole_exclusion)
        .filter_map(|q| proj_s3(q).ok())
        .collect()
}

/// Bisects `f` on `[lo, hi]` given a sign change, to width `eps`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, eps: f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > eps {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Crossings of the projected fiber over `base` with the y,z-plane.
pub fn axis_link_report(base: PointS2, n_samples: usize) -> Result<LinkReport> {
    let tol = Tolerances::global();
    check_link_samples(n_samples)?;
    let b = base.to_point3();
    for pole in [Point3::X, -Point3::X] {
        if b.distance(&pole) <= tol.base_separation {
            return Err(HopfError::domain(format!(
                "base point {base} is within {:e} of {pole}; its projected fiber has no two-point crossing",
                tol.base_separation
            )));
        }
    }

    let gauge = stable_gauge(base);
    // The projected x-coordinate has the sign of the S³ x-coordinate.
    let x_of = |t: f64| (gauge * exp_i(t)).quaternion().b;
    let ts: Vec<f64> = uniform_t(n_samples).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| x_of(t)).collect();

    let mut roots = Vec::new();
    for k in 0..n_samples {
        let (t0, f0) = (ts[k], fs[k]);
        let (t1, f1) = if k + 1 < n_samples { (ts[k + 1], fs[k + 1]) } else { (TAU, fs[0]) };
        if f0 == 0.0 {
            roots.push(t0);
        } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            roots.push(bisect(x_of, t0, t1, tol.bisection));
        }
    }
    if roots.len() != 2 {
        return Err(HopfError::Consistency(format!(
            "projected fiber over {base} crosses the y,z-plane {} times, expected 2",
            roots.len()
        )));
    }

    let cross = |t: f64| proj_s3(gauge * exp_i(t)).map_err(|e| e.context("crossing point"));
    let (p0, p1) = (cross(roots[0])?, cross(roots[1])?);
    let ((t_in, inside), (t_out, outside)) = if p0.norm() <= p1.norm() {
        ((roots[0], p0), (roots[1], p1))
    } else {
        ((roots[1], p1), (roots[0], p0))
    };
    let (dist_inside, dist_outside) = (inside.norm(), outside.norm());
    let line_direction = (inside - outside)
        .normalized()
        .ok_or_else(|| HopfError::Consistency(format!("coincident crossings over {base}")))?;

    let fiber_curve = projected_samples(gauge, n_samples);
    let gauss = gauss_linking(&fiber_curve, &unit_yz_circle(n_samples))
        .map_err(|e| e.context(&format!("linking number of the fiber over {base}")))?;

    Ok(LinkReport {
        base,
        inside,
        outside,
        t_inside: t_in,
        t_outside: t_out,
        dist_inside,
        dist_outside,
        line_direction,
        gauss,
        linked: dist_inside < 1.0 && 1.0 < dist_outside,
    })
}

/// `ψ(p) = s(k r⁻¹ s⁻¹(p))`, with `s` the stereographic projection from
/// `(1,0,0,0)` and `k = (0,0,0,1)`.
///
/// Undefined at the single point whose image is the projection pole.
pub fn psi(p: Point3, r: UnitQuaternion) -> Result<Point3> {
    let image = UnitQuaternion::K * r.inverse() * unproj_s3(p);
    proj_s3(image).map_err(|e| e.context(&format!("ψ({p})")))
}

/// Smallest distance from `v` to the segment `[a, b]`.
fn point_segment_distance(v: Point3, a: Point3, b: Point3) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(&ab);
    let s = if len2 > 0.0 { ((v - a).dot(&ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    v.distance(&(a + ab * s))
}

fn min_vertex_segment_distance(verts: &[Point3], poly: &[Point3]) -> f64 {
    let n = poly.len();
    verts
        .iter()
        .flat_map(|&v| (0..n).map(move |i| point_segment_distance(v, poly[i], poly[(i + 1) % n])))
        .fold(f64::INFINITY, f64::min)
}

/// Solid-angle contribution of the segment pair `(p1→p2, p3→p4)` to the
/// Gauss integral, i.e. `4π` times the exact double integral over the
/// two segments.
fn segment_pair_solid_angle(p1: Point3, p2: Point3, p3: Point3, p4: Point3) -> f64 {
    let r13 = p3 - p1;
    let r14 = p4 - p1;
    let r23 = p3 - p2;
    let r24 = p4 - p2;
    let faces = [r13.cross(&r14), r14.cross(&r24), r24.cross(&r23), r23.cross(&r13)];
    let mut normals = [Point3::ORIGIN; 4];
    for (slot, f) in normals.iter_mut().zip(faces) {
        match f.normalized() {
            Some(n) => *slot = n,
            // coplanar segments contribute nothing
            None => return 0.0,
        }
    }
    let omega: f64 = (0..4)
        .map(|i| normals[i].dot(&normals[(i + 1) % 4]).clamp(-1.0, 1.0).asin())
        .sum();
    let orientation = (p4 - p3).cross(&(p2 - p1)).dot(&r13);
    if orientation > 0.0 {
        omega
    } else if orientation < 0.0 {
        -omega
    } else {
        0.0
    }
}

/// Gauss linking number of two closed polylines (the last vertex connects
/// back to the first).
///
/// Each segment pair is integrated exactly, so for polygons the sum is an
/// integer up to rounding. Summation order is fixed.
pub fn gauss_linking(curve_a: &[Point3], curve_b: &[Point3]) -> Result<f64> {
    let tol = Tolerances::global();
    for (name, c) in [("first", curve_a), ("second", curve_b)] {
        if c.len() < MIN_LINK_VERTICES {
            return Err(HopfError::domain(format!(
                "{name} curve has {} vertices, need at least {MIN_LINK_VERTICES}",
                c.len()
            )));
        }
        if let Some(bad) = c.iter().find(|p| !p.is_finite()) {
            return Err(HopfError::domain(format!("{name} curve has non-finite vertex {bad}")));
        }
    }
    let gap = min_vertex_segment_distance(curve_a, curve_b)
        .min(min_vertex_segment_distance(curve_b, curve_a));
    if gap <= tol.proximity {
        return Err(HopfError::Proximity(format!(
            "curves come within {gap:e} of each other (minimum {:e})",
            tol.proximity
        )));
    }

    let (na, nb) = (curve_a.len(), curve_b.len());
    let mut total = 0.0;
    for i in 0..na {
        let (a0, a1) = (curve_a[i], curve_a[(i + 1) % na]);
        for j in 0..nb {
            total += segment_pair_solid_angle(a0, a1, curve_b[j], curve_b[(j + 1) % nb]);
        }
    }
    Ok(total / (4.0 * PI))
}

/// Closed polyline for a projected fiber: its samples for a circle, or for a
/// line a long segment closed by a far-away half circle.
fn closed_curve(samples: &[Point3], shape: &CircleOrLine3, reach: f64, n: usize) -> Vec<Point3> {
    match *shape {
        CircleOrLine3::Circle { .. } => samples.to_vec(),
        CircleOrLine3::Line { point, direction } => {
            let helper = if direction.x.abs() < 0.9 { Point3::X } else { Point3::Y };
            let side = direction.cross(&helper).normalized().unwrap_or(Point3::Z);
            let half = (n / 2).max(MIN_LINK_VERTICES);
            let mut out = Vec::with_capacity(2 * half);
            for k in 0..half {
                let s = -1.0 + 2.0 * k as f64 / half as f64;
                out.push(point + direction * (reach * s));
            }
            for k in 0..half {
                let phi = PI * k as f64 / half as f64;
                out.push(point + direction * (reach * phi.cos()) + side * (reach * phi.sin()));
            }
            out
        }
    }
}

/// Checks that the projected fibers over two distinct base points are
/// linked, by the ψ-transformed crossing criterion and by the Gauss linking
/// number of the original pair.
pub fn pairwise_link_check(
    base_a: PointS2,
    base_b: PointS2,
    n_samples: usize,
) -> Result<PairLinkReport> {
    let tol = Tolerances::global();
    check_link_samples(n_samples)?;
    let separation = base_a.distance(&base_b);
    if separation == 0.0 {
        return Err(HopfError::domain(format!(
            "both base points are {base_a}: the same fiber is not a pair"
        )));
    }
    if separation <= tol.base_separation {
        return Err(HopfError::Proximity(format!(
            "base points {base_a} and {base_b} are {separation:e} apart (minimum {:e})",
            tol.base_separation
        )));
    }

    let samples_a = projected_samples(stable_gauge(base_a), n_samples);
    let samples_b = projected_samples(stable_gauge(base_b), n_samples);
    let fit_a = fit_circle_or_line(&samples_a).map_err(|e| e.context("first fiber"))?;
    let fit_b = fit_circle_or_line(&samples_b).map_err(|e| e.context("second fiber"))?;

    // ψ built from a point on the first fiber maps that fiber onto the unit
    // circle in the y,z-plane.
    let r = unproj_s3(samples_a[0]);
    let mut psi_circle_deviation: f64 = 0.0;
    for p in &samples_a {
        let q = psi(*p, r).map_err(|e| e.context("first fiber"))?;
        let rho = q.y.hypot(q.z);
        psi_circle_deviation = psi_circle_deviation.max(q.x.hypot(rho - 1.0));
    }

    let mut transformed_bases = Vec::with_capacity(samples_b.len());
    // The image base is read off in S³: for an antipodal pair the image
    // fiber runs through the projection pole, so projecting first would fail.
    let to_image = UnitQuaternion::K * r.inverse();
    for p in &samples_b {
        transformed_bases.push(hopf(to_image * unproj_s3(*p)));
    }
    let transformed_base = transformed_bases[0];
    let base_drift = transformed_bases
        .iter()
        .map(|b| b.distance(&transformed_base))
        .fold(0.0, f64::max);
    if base_drift > 1e-6 {
        return Err(HopfError::Consistency(format!(
            "ψ-image of the fiber over {base_b} is not a single fiber (base drift {base_drift:e})"
        )));
    }

    let transformed_report = if transformed_base.to_point3().distance(&Point3::X) <= tol.base_separation {
        TransformedLink::AxisLine
    } else {
        TransformedLink::Circle(
            axis_link_report(transformed_base, n_samples)
                .map_err(|e| e.context("ψ-transformed second fiber"))?,
        )
    };

    let extent = samples_a
        .iter()
        .chain(&samples_b)
        .filter(|p| p.norm() < 1e6)
        .map(|p| p.norm())
        .fold(1.0, f64::max);
    let reach = 1e3 * extent;
    let curve_a = closed_curve(&samples_a, &fit_a.shape, reach, n_samples);
    let curve_b = closed_curve(&samples_b, &fit_b.shape, reach, n_samples);
    let gauss_direct = gauss_linking(&curve_a, &curve_b).map_err(|e| e.context("direct pair"))?;

    let linked = gauss_direct.abs().round() == 1.0;
    Ok(PairLinkReport {
        base_a,
        base_b,
        transformed_base,
        transformed_report,
        psi_circle_deviation,
        gauss_direct,
        linked,
        verdicts_agree: linked == transformed_report.linked(),
    })
}

/// Fiber point over `base` at parameter `t`, in the gauge used by the link
/// checks.
pub fn link_fiber_point(base: PointS2, t: f64) -> PointS3 {
    stable_gauge(base) * exp_i(t)
}
