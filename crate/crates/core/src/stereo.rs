//! Stereographic projections `S² \ (0,0,1) → ℝ²` and
//! `S³ \ (1,0,0,0) → ℝ³`, and classification of projected point sets as
//! circles or lines.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{HopfError, Result};
use crate::hopf::{PointS2, PointS3};
use crate::quat::{Quaternion, UnitQuaternion};
use crate::rotation::Point3;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub u: f64,
    pub v: f64,
}

impl Point2 {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn distance(&self, o: &Point2) -> f64 {
        (self.u - o.u).hypot(self.v - o.v)
    }
}

/// `(x, y, z) ↦ (x/(1−z), y/(1−z))`.
pub fn proj_s2(p: PointS2) -> Result<Point2> {
    let tol = Tolerances::global();
    let [x, y, z] = p.to_array();
    let denom = 1.0 - z;
    if denom.abs() <= tol.pole {
        return Err(HopfError::pole(format!(
            "{p} is within {:e} of the projection pole (0,0,1)",
            tol.pole
        )));
    }
    Ok(Point2::new(x / denom, y / denom))
}

pub fn unproj_s2(q: Point2) -> PointS2 {
    let s = q.u * q.u + q.v * q.v;
    let k = 1.0 / (s + 1.0);
    PointS2::new_unchecked(2.0 * q.u * k, 2.0 * q.v * k, (s - 1.0) * k)
}

/// `(w, x, y, z) ↦ (x, y, z)/(1−w)`.
pub fn proj_s3(q: PointS3) -> Result<Point3> {
    let tol = Tolerances::global();
    let Quaternion { a: w, b: x, c: y, d: z } = q.quaternion();
    let denom = 1.0 - w;
    if denom.abs() <= tol.pole {
        return Err(HopfError::pole(format!(
            "{} is within {:e} of the projection pole (1,0,0,0)",
            q.quaternion(),
            tol.pole
        )));
    }
    Ok(Point3::new(x / denom, y / denom, z / denom))
}

/// With `s = ‖p‖²`: `((s−1)/(s+1), 2p/(s+1))`.
pub fn unproj_s3(p: Point3) -> PointS3 {
    let s = p.dot(&p);
    let k = 1.0 / (s + 1.0);
    UnitQuaternion::new_unchecked(Quaternion::new(
        (s - 1.0) * k,
        2.0 * p.x * k,
        2.0 * p.y * k,
        2.0 * p.z * k,
    ))
}

/// A circle or a straight line in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircleOrLine3 {
    Circle {
        center: Point3,
        radius: f64,
        normal: Point3,
    },
    Line {
        point: Point3,
        direction: Point3,
    },
}

/// A classified fit together with the residual of the chosen model: the
/// maximum distance to the line, or the larger of the maximum radial and
/// maximum out-of-plane deviation from the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub shape: CircleOrLine3,
    pub residual: f64,
}

/// Minimum number of points accepted by [`fit_circle_or_line`].
pub const MIN_FIT_POINTS: usize = 8;

const SIGN_EPS: f64 = 1e-12;

/// Classifies `points` as a line (checked first) or a circle.
///
/// The line branch is taken when every point is within `collinear · spread`
/// of the principal axis, `spread` being the largest distance from the
/// centroid. Otherwise a plane is fitted through the centroid (normal along
/// the least-variance direction) and a circle is fitted inside it.
pub fn fit_circle_or_line(points: &[Point3]) -> Result<Fit> {
    let tol = Tolerances::global();
    if points.len() < MIN_FIT_POINTS {
        return Err(HopfError::domain(format!(
            "fit needs at least {MIN_FIT_POINTS} points, got {}",
            points.len()
        )));
    }
    if let Some(bad) = points.iter().find(|p| !p.is_finite()) {
        return Err(HopfError::domain(format!("fit input contains non-finite point {bad}")));
    }

    let n = points.len() as f64;
    let centroid = points.iter().fold(Point3::ORIGIN, |acc, p| acc + *p) * (1.0 / n);
    let spread = points
        .iter()
        .map(|p| p.distance(&centroid))
        .fold(0.0, f64::max);
    if spread == 0.0 {
        return Err(HopfError::domain("fit input points are all coincident"));
    }

    // Work in coordinates centered on the centroid and scaled to unit spread.
    let local: Vec<Point3> = points.iter().map(|p| (*p - centroid) * (1.0 / spread)).collect();
    let mut cov = Matrix3::zeros();
    for p in &local {
        let v = nalgebra::Vector3::new(p.x, p.y, p.z);
        cov += v * v.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let axis = |k: usize| {
        let c = eig.eigenvectors.column(order[k]);
        Point3::new(c[0], c[1], c[2]).normalized().unwrap_or(Point3::X)
    };
    let normal = axis(0);
    let major = axis(2);

    let line_residual = local
        .iter()
        .map(|p| (*p - major * p.dot(&major)).norm())
        .fold(0.0, f64::max)
        * spread;
    if line_residual < tol.collinear * spread {
        let direction = major.canonical_sign(SIGN_EPS);
        let point = centroid - direction * centroid.dot(&direction);
        return Ok(Fit {
            shape: CircleOrLine3::Line { point, direction },
            residual: line_residual,
        });
    }

    let minor = normal.cross(&major);
    let planar: Vec<(f64, f64)> = local.iter().map(|p| (p.dot(&major), p.dot(&minor))).collect();
    let (cu, cv, r) = fit_circle_2d(&planar)
        .ok_or(HopfError::Fit { line_residual, circle_residual: f64::INFINITY })?;
    let center = centroid + (major * cu + minor * cv) * spread;
    let radius = r * spread;

    let mut radial_residual: f64 = 0.0;
    let mut planar_residual: f64 = 0.0;
    for p in points {
        let d = *p - center;
        planar_residual = planar_residual.max(d.dot(&normal).abs());
        radial_residual = radial_residual.max((d.norm() - radius).abs());
    }
    let circle_residual = radial_residual.max(planar_residual);
    if radius.is_nan() || radius <= 0.0 || circle_residual > tol.fit_residual * radius.max(1.0) {
        return Err(HopfError::Fit { line_residual, circle_residual });
    }
    Ok(Fit {
        shape: CircleOrLine3::Circle {
            center,
            radius,
            normal: normal.canonical_sign(SIGN_EPS),
        },
        residual: circle_residual,
    })
}

/// Algebraic least-squares circle followed by a few geometric Gauss-Newton
/// steps. Returns `(center_u, center_v, radius)`.
fn fit_circle_2d(pts: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let m = pts.len();
    let a = DMatrix::from_fn(m, 3, |i, j| match j {
        0 => pts[i].0,
        1 => pts[i].1,
        _ => 1.0,
    });
    let b = DVector::from_fn(m, |i, _| -(pts[i].0 * pts[i].0 + pts[i].1 * pts[i].1));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let (mut cu, mut cv) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let mut r = (cu * cu + cv * cv - sol[2]).sqrt();
    if !r.is_finite() {
        return None;
    }

    for _ in 0..8 {
        let mut jac = DMatrix::zeros(m, 3);
        let mut res = DVector::zeros(m);
        for (i, &(x, y)) in pts.iter().enumerate() {
            let (dx, dy) = (x - cu, y - cv);
            let d = dx.hypot(dy);
            if d == 0.0 {
                return Some((cu, cv, r));
            }
            jac[(i, 0)] = -dx / d;
            jac[(i, 1)] = -dy / d;
            jac[(i, 2)] = -1.0;
            res[i] = -(d - r);
        }
        let step = jac.svd(true, true).solve(&res, 1e-14).ok()?;
        cu += step[0];
        cv += step[1];
        r += step[2];
        if step.norm() <= 1e-15 * (1.0 + r.abs()) {
            break;
        }
    }
    (r.is_finite() && r > 0.0).then_some((cu, cv, r.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{SQRT_2, TAU};

    fn s2(p1: f64, p2: f64, p3: f64) -> PointS2 {
        PointS2::new(p1, p2, p3).unwrap()
    }

    #[test]
    fn proj_s2_examples() {
        assert_eq!(proj_s2(s2(0.0, 0.0, -1.0)).unwrap(), Point2::new(0.0, 0.0));
        assert_eq!(proj_s2(s2(1.0, 0.0, 0.0)).unwrap(), Point2::new(1.0, 0.0));
        assert!(proj_s2(s2(0.0, 0.6, 0.8)).unwrap().distance(&Point2::new(0.0, 3.0)) < 1e-14);
        assert!(matches!(proj_s2(s2(0.0, 0.0, 1.0)), Err(HopfError::Pole(_))));
    }

    #[test]
    fn unproj_s2_examples() {
        assert_eq!(unproj_s2(Point2::new(0.0, 0.0)), s2(0.0, 0.0, -1.0));
        assert_eq!(unproj_s2(Point2::new(1.0, 0.0)), s2(1.0, 0.0, 0.0));
        assert!(unproj_s2(Point2::new(0.0, 3.0)).distance(&s2(0.0, 0.6, 0.8)) < 1e-15);
    }

    #[test]
    fn proj_s3_examples() {
        assert_eq!(proj_s3(-UnitQuaternion::ONE).unwrap(), Point3::ORIGIN);
        assert_eq!(proj_s3(UnitQuaternion::I).unwrap(), Point3::X);
        for t in [0.0, 0.4, 2.0, 5.5] {
            let q = UnitQuaternion::new(Quaternion::new(0.0, 0.0, f64::sin(t), f64::cos(t))).unwrap();
            let p = proj_s3(q).unwrap();
            assert!(p.distance(&Point3::new(0.0, t.sin(), t.cos())) < 1e-15);
        }
        assert!(matches!(proj_s3(UnitQuaternion::ONE), Err(HopfError::Pole(_))));
    }

    #[test]
    fn unproj_s3_examples() {
        assert_eq!(unproj_s3(Point3::ORIGIN), -UnitQuaternion::ONE);
        assert_eq!(unproj_s3(Point3::X), UnitQuaternion::I);
        let q = unproj_s3(Point3::new(0.0, 0.0, SQRT_2 + 1.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(q.quaternion().distance(&Quaternion::new(h, 0.0, 0.0, h)) < 1e-15);
    }

    fn ring(center: Point3, u: Point3, v: Point3, r: f64, n: usize) -> Vec<Point3> {
        (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                center + u * (r * t.cos()) + v * (r * t.sin())
            })
            .collect()
    }

    #[test]
    fn fits_tilted_circle() {
        let u = Point3::new(1.0, 1.0, 0.0).normalized().unwrap();
        let n = Point3::new(-1.0, 1.0, 1.0).normalized().unwrap();
        let v = n.cross(&u);
        let c = Point3::new(3.0, -2.0, 0.5);
        let fit = fit_circle_or_line(&ring(c, u, v, 2.5, 40)).unwrap();
        match fit.shape {
            CircleOrLine3::Circle { center, radius, normal } => {
                assert!(center.distance(&c) < 1e-12);
                assert!((radius - 2.5).abs() < 1e-12);
                // canonical sign flips n, whose first component is negative
                assert!(normal.distance(&-n) < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn fits_line_with_foot_point() {
        let d = Point3::new(0.0, 3.0, -4.0) * 0.2;
        let base = Point3::new(1.0, 2.0, 1.5);
        let pts: Vec<Point3> = (0..10).map(|k| base + d * (k as f64 * 0.7 - 2.0)).collect();
        match fit_circle_or_line(&pts).unwrap().shape {
            CircleOrLine3::Line { point, direction } => {
                assert!(direction.distance(&d) < 1e-12);
                assert!(point.dot(&direction).abs() < 1e-12);
                assert!((point - base).cross(&direction).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fit_errors() {
        let few = ring(Point3::ORIGIN, Point3::X, Point3::Y, 1.0, 7);
        assert!(matches!(fit_circle_or_line(&few), Err(HopfError::Domain(_))));
        let same = vec![Point3::new(1.0, 2.0, 3.0); 9];
        assert!(matches!(fit_circle_or_line(&same), Err(HopfError::Domain(_))));
        // a helix is neither a line nor a circle
        let helix: Vec<Point3> = (0..32)
            .map(|k| {
                let t = k as f64 * 0.4;
                Point3::new(t.cos(), t.sin(), 0.3 * t)
            })
            .collect();
        assert!(matches!(fit_circle_or_line(&helix), Err(HopfError::Fit { .. })));
    }
}
