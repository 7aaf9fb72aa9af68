//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, in order.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower::ServiceExt;

use hopf_atlas::cli::{cmd_fiber, FiberArgs, Format, GaugeArg};
use hopf_atlas::document::FiberDocument;
use hopf_atlas::{
    axis_link_report, fiber, fit_circle_or_line, hopf, hopf_quat, link_fiber_point, mul,
    pairwise_link_check, proj_s2, proj_s3, psi, rotate, rotations_taking_x_to, to_axis_angle,
    CircleOrLine3, GaugeKind, Point3, PointS2, Quaternion, RotationClass, UnitQuaternion,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction in ℝⁿ by rejection from the cube.
fn random_direction<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return v.map(|x| x / n);
        }
    }
}

fn random_unit_quaternion(rng: &mut ChaCha8Rng) -> UnitQuaternion {
    let [a, b, c, d] = random_direction::<4>(rng);
    UnitQuaternion::normalize(Quaternion::new(a, b, c, d)).unwrap()
}

fn random_s2(rng: &mut ChaCha8Rng) -> PointS2 {
    let [x, y, z] = random_direction::<3>(rng);
    PointS2::new(x, y, z).unwrap()
}

fn random_point3(rng: &mut ChaCha8Rng) -> Point3 {
    Point3::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))
}

/// Fibonacci grid on S², dropping caps of radius `cap` around ±(1,0,0).
fn fibonacci_grid(n: usize, cap: f64) -> Vec<PointS2> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let x = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - x * x).sqrt();
            let phi = golden * i as f64;
            PointS2::new(x, rho * phi.cos(), rho * phi.sin()).unwrap()
        })
        .filter(|p| p.to_point3().distance(&Point3::X) > cap && p.to_point3().distance(&-Point3::X) > cap)
        .collect()
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    if elapsed >= limit {
        return Err(format!("{detail}; took {elapsed:.2?} (limit {limit:?})"));
    }
    Ok(format!("{detail}; {elapsed:.2?}"))
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_hopf_forms() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut rng = rng(1);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let r = random_unit_quaternion(&mut rng);
            worst = worst.max(hopf(r).to_point3().distance(&hopf_quat(r).to_point3()));
        }
        check(worst < 1e-12, format!("max |hopf - hopf_quat| = {worst:.3e} over 10000 quaternions"))
    })
}

fn c2_fiber_correctness() -> Outcome {
    timed(Duration::from_secs(1), || {
        let grid = fibonacci_grid(200, 1e-3);
        let mut worst: f64 = 0.0;
        for &p in &grid {
            for gauge in [GaugeKind::R1, GaugeKind::R2, GaugeKind::Auto] {
                let f = fiber(p, gauge, 64).map_err(|e| format!("{p}: {e}"))?;
                for q in &f.points {
                    worst = worst.max(hopf(*q).distance(&p));
                }
            }
        }
        check(worst < 1e-9, format!("max |hopf(sample) - P| = {worst:.3e} over {} grid points x 3 gauges", grid.len()))
    })
}

fn c3_gauge_equivalence() -> Outcome {
    let grid = fibonacci_grid(200, 1e-3);
    let mut worst: f64 = 0.0;
    for &p in &grid {
        let (r1, r2) = rotations_taking_x_to(p).map_err(|e| e.to_string())?;
        let q = (r1.inverse() * r2).quaternion();
        worst = worst.max(q.c.abs()).max(q.d.abs());
    }
    check(worst < 1e-9, format!("max |j|,|k| of inv(r1)·r2 = {worst:.3e} over {} grid points", grid.len()))
}

fn c4_homomorphism() -> Outcome {
    let mut rng = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let r = random_unit_quaternion(&mut rng).quaternion().scale(rng.random_range(0.1..10.0));
        let s = random_unit_quaternion(&mut rng).quaternion().scale(rng.random_range(0.1..10.0));
        for _ in 0..10 {
            let p = random_point3(&mut rng);
            let lhs = rotate(r * s, p).unwrap();
            let rhs = rotate(r, rotate(s, p).unwrap()).unwrap();
            worst = worst.max(lhs.distance(&rhs) / p.norm().max(f64::MIN_POSITIVE));
        }
    }
    check(worst < 1e-9, format!("max relative error = {worst:.3e} over 100000 (r,s,p) triples"))
}

fn c5_double_cover_and_scale() -> Outcome {
    let mut rng = rng(5);
    let (mut worst_neg, mut worst_scale): (f64, f64) = (0.0, 0.0);
    for _ in 0..1_000 {
        let r = random_unit_quaternion(&mut rng).quaternion().scale(rng.random_range(0.1..10.0));
        let k = if rng.random_bool(0.5) { 1.0 } else { -1.0 } * rng.random_range(1e-3..1e3);
        for e in [Point3::X, Point3::Y, Point3::Z] {
            let base = rotate(r, e).unwrap();
            worst_neg = worst_neg.max(rotate(-r, e).unwrap().distance(&base));
            worst_scale = worst_scale.max(rotate(r.scale(k), e).unwrap().distance(&base));
        }
    }
    check(
        worst_neg < 1e-12 && worst_scale < 1e-9,
        format!("max deviation: -r {worst_neg:.3e}, k·r {worst_scale:.3e} over 1000 trials"),
    )
}

fn c6_axis_angle() -> Outcome {
    let mut rng = rng(6);
    let (mut worst_axis, mut worst_angle): (f64, f64) = (0.0, 0.0);
    for i in 0..1_000 {
        let r = if i < 50 {
            let t: f64 = rng.random_range(0.0..TAU);
            UnitQuaternion::normalize(Quaternion::new(t.cos(), 0.0, 0.0, t.sin())).unwrap()
        } else {
            random_unit_quaternion(&mut rng)
        };
        let q = r.quaternion();
        let v = Point3::new(q.b, q.c, q.d);
        worst_axis = worst_axis.max(r.rotate(v).distance(&v));
        let Some(axis) = v.normalized() else { continue };
        let helper = if axis.x.abs() < 0.9 { Point3::X } else { Point3::Y };
        let w = axis.cross(&helper) * rng.random_range(0.1..10.0);
        let value = w.dot(&r.rotate(w)) / w.dot(&w) - (2.0 * q.a * q.a - 1.0);
        worst_angle = worst_angle.max(value.abs());
        if let RotationClass::Rotation(aa) = to_axis_angle(r) {
            worst_angle = worst_angle.max((aa.angle.cos() - (2.0 * q.a * q.a - 1.0)).abs());
        }
    }
    check(
        worst_axis < 1e-9 && worst_angle < 1e-9,
        format!("max eigenvector residual {worst_axis:.3e}, max angle-check value {worst_angle:.3e} (1000 quaternions, 50 with b=c=0)"),
    )
}

fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
    (0..4).map(|i| a[i] * b[i]).sum()
}

fn orthonormal_to<const N: usize>(rng: &mut ChaCha8Rng, basis: &[[f64; N]]) -> [f64; N] {
    loop {
        let mut v = random_direction::<N>(rng);
        for b in basis {
            let d: f64 = (0..N).map(|i| v[i] * b[i]).sum();
            for i in 0..N {
                v[i] -= d * b[i];
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            return v.map(|x| x / n);
        }
    }
}

/// Circle `cos θ·c + sin θ·(cos t·u + sin t·v)` on the unit sphere of ℝⁿ.
/// With `through` set, the circle is bent to pass through that point.
fn sphere_circle<const N: usize>(rng: &mut ChaCha8Rng, through: Option<[f64; N]>, n: usize) -> Vec<[f64; N]> {
    let (c, theta, u) = match through {
        None => {
            let c = random_direction::<N>(rng);
            let theta = rng.random_range(0.05..PI - 0.05);
            (c, theta, orthonormal_to(rng, &[c]))
        }
        Some(e) => loop {
            let c = random_direction::<N>(rng);
            let cos = (0..N).map(|i| c[i] * e[i]).sum::<f64>();
            if cos.abs() > 0.95 {
                continue;
            }
            let u: [f64; N] = std::array::from_fn(|i| e[i] - cos * c[i]);
            let un = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            break (c, cos.acos(), u.map(|x| x / un));
        },
    };
    let v = orthonormal_to(rng, &[c, u]);
    (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            std::array::from_fn(|i| theta.cos() * c[i] + theta.sin() * (t.cos() * u[i] + t.sin() * v[i]))
        })
        .collect()
}

fn c7_circle_preservation() -> Outcome {
    let mut rng = rng(7);
    let n = 64;
    let (mut circles, mut worst_circle): (usize, f64) = (0, 0.0);
    let pole2 = [0.0, 0.0, 1.0];
    let pole3 = [1.0, 0.0, 0.0, 0.0];
    let project2 = |pts: &[[f64; 3]], skip: f64| -> Vec<Point3> {
        pts.iter()
            .filter(|p| Point3::new(p[0], p[1], p[2]).distance(&Point3::Z) > skip)
            .map(|p| {
                let q = proj_s2(PointS2::new(p[0], p[1], p[2]).unwrap()).unwrap();
                Point3::new(q.u, q.v, 0.0)
            })
            .collect()
    };
    let project3 = |pts: &[[f64; 4]], skip: f64| -> Vec<Point3> {
        pts.iter()
            .filter(|p| (2.0 - 2.0 * dot4(**p, pole3)).max(0.0).sqrt() > skip)
            .map(|p| proj_s3(UnitQuaternion::normalize(Quaternion::new(p[0], p[1], p[2], p[3])).unwrap()).unwrap())
            .collect()
    };

    let mut failures = Vec::new();
    let mut s2 = 0;
    while s2 < 100 {
        let pts = sphere_circle::<3>(&mut rng, None, n);
        if pts.iter().any(|p| Point3::new(p[0], p[1], p[2]).distance(&Point3::Z) <= 1e-3) {
            continue;
        }
        s2 += 1;
        match fit_circle_or_line(&project2(&pts, 0.0)) {
            Ok(f) if matches!(f.shape, CircleOrLine3::Circle { .. }) => {
                circles += 1;
                worst_circle = worst_circle.max(f.residual);
            }
            other => failures.push(format!("S² circle: {other:?}")),
        }
    }
    let mut s3 = 0;
    while s3 < 100 {
        let pts = sphere_circle::<4>(&mut rng, None, n);
        if pts.iter().any(|p| (2.0 - 2.0 * dot4(*p, pole3)).max(0.0).sqrt() <= 1e-3) {
            continue;
        }
        s3 += 1;
        match fit_circle_or_line(&project3(&pts, 0.0)) {
            Ok(f) if matches!(f.shape, CircleOrLine3::Circle { .. }) => {
                circles += 1;
                worst_circle = worst_circle.max(f.residual);
            }
            other => failures.push(format!("S³ circle: {other:?}")),
        }
    }

    let (mut lines, mut worst_line): (usize, f64) = (0, 0.0);
    for i in 0..20 {
        let projected = if i % 2 == 0 {
            project2(&sphere_circle::<3>(&mut rng, Some(pole2), n), 1e-3)
        } else {
            project3(&sphere_circle::<4>(&mut rng, Some(pole3), n), 1e-3)
        };
        match fit_circle_or_line(&projected) {
            Ok(f) if matches!(f.shape, CircleOrLine3::Line { .. }) => {
                lines += 1;
                worst_line = worst_line.max(f.residual);
            }
            other => failures.push(format!("through-pole circle: {other:?}")),
        }
    }
    check(
        failures.is_empty() && worst_circle < 1e-6 && worst_line < 1e-6,
        format!(
            "{circles}/200 circles (max residual {worst_circle:.3e}), {lines}/20 lines (max residual {worst_line:.3e}){}",
            failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn c8_known_projections() -> Outcome {
    let south = FiberDocument::build(PointS2::new(-1.0, 0.0, 0.0).unwrap(), GaugeKind::Auto, 256)
        .map_err(|e| e.to_string())?;
    let CircleOrLine3::Circle { center, radius, normal } = south.fit else {
        return Err(format!("fiber over (-1,0,0) fitted as {:?}", south.fit));
    };
    let circle_err = center.norm().max((radius - 1.0).abs()).max(1.0 - normal.x.abs());
    let north = FiberDocument::build(PointS2::new(1.0, 0.0, 0.0).unwrap(), GaugeKind::Auto, 256)
        .map_err(|e| e.to_string())?;
    let CircleOrLine3::Line { point, direction } = north.fit else {
        return Err(format!("fiber over (1,0,0) fitted as {:?}", north.fit));
    };
    let line_err = point.norm().max(1.0 - direction.x.abs());
    check(
        circle_err < 1e-9 && line_err < 1e-9,
        format!("(-1,0,0): unit y,z-circle within {circle_err:.3e}; (1,0,0): x-axis within {line_err:.3e}"),
    )
}

fn c9_linkage() -> Outcome {
    timed(Duration::from_secs(30), || {
        let mut rng = rng(9);
        let mut failures = Vec::new();
        let (mut worst_gauss, mut worst_dir, mut worst_prod): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..100 {
            let a = random_s2(&mut rng);
            let b = random_s2(&mut rng);
            let pair = pairwise_link_check(a, b, 256).map_err(|e| format!("{a} / {b}: {e}"))?;
            worst_gauss = worst_gauss.max((pair.gauss_direct.abs() - 1.0).abs());
            if !pair.linked || !pair.verdicts_agree {
                failures.push(format!("pair {a} / {b} not linked: {pair:?}"));
            }
            for p in [a, b] {
                let rep = axis_link_report(p, 256).map_err(|e| format!("{p}: {e}"))?;
                let one_in_one_out = rep.dist_inside < 1.0 && rep.dist_outside > 1.0;
                let expected = Point3::new(0.0, p.p3(), -p.p2()).normalized().unwrap();
                worst_dir = worst_dir.max(rep.line_direction.distance(&expected));
                worst_prod = worst_prod.max((rep.dist_inside * rep.dist_outside - 1.0).abs());
                worst_gauss = worst_gauss.max((rep.gauss.abs() - 1.0).abs());
                if !one_in_one_out || !rep.linked {
                    failures.push(format!("axis report for {p}: {rep:?}"));
                }
            }
        }
        check(
            failures.is_empty() && worst_gauss < 0.02 && worst_dir < 1e-6 && worst_prod < 1e-6,
            format!(
                "100 pairs: max ||gauss|-1| {worst_gauss:.3e}, direction error {worst_dir:.3e}, |dist product - 1| {worst_prod:.3e}{}",
                failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
            ),
        )
    })
}

fn c10_psi_target() -> Outcome {
    let mut rng = rng(10);
    let dense = 4096;
    let circle: Vec<Point3> = (0..512)
        .map(|k| {
            let t = TAU * k as f64 / 512.0;
            Point3::new(0.0, t.sin(), t.cos())
        })
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let base = random_s2(&mut rng);
        let r = link_fiber_point(base, rng.random_range(0.0..TAU));
        let image: Vec<Point3> = (0..dense)
            .filter_map(|k| proj_s3(link_fiber_point(base, TAU * k as f64 / dense as f64)).ok())
            .map(|p| psi(p, r).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        // Image → circle: exact distance to the unit y,z-circle.
        let to_circle = image
            .iter()
            .map(|q| q.x.hypot(q.y.hypot(q.z) - 1.0))
            .fold(0.0, f64::max);
        // Circle → image: distance to the closed image polyline.
        let to_image = circle
            .iter()
            .map(|c| {
                (0..image.len())
                    .map(|i| segment_distance(*c, image[i], image[(i + 1) % image.len()]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        worst = worst.max(to_circle).max(to_image);
    }
    check(worst < 1e-6, format!("max Hausdorff distance {worst:.3e} over 50 fibers"))
}

fn segment_distance(v: Point3, a: Point3, b: Point3) -> f64 {
    let ab = b - a;
    let s = ((v - a).dot(&ab) / ab.dot(&ab)).clamp(0.0, 1.0);
    v.distance(&(a + ab * s))
}

fn c11_golden() -> Outcome {
    let fixtures = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let runtime = tokio::runtime::Builder::new_current_thread().enable_all().build().unwrap();
    let mut checked = 0;
    for (point, query, file) in [
        ([0.0, 1.0, 0.0], "p1=0&p2=1&p3=0", "fiber_0_1_0.json"),
        ([1.0, 0.0, 0.0], "p1=1&p2=0&p3=0", "fiber_1_0_0.json"),
        ([-1.0, 0.0, 0.0], "p1=-1&p2=0&p3=0", "fiber_neg1_0_0.json"),
    ] {
        let cli = cmd_fiber(&FiberArgs {
            point,
            samples: 256,
            gauge: GaugeArg::Auto,
            format: Format::Json,
            out: None,
        }).map_err(|e| e.message)?;
        let golden = std::fs::read_to_string(fixtures.join(file)).map_err(|e| e.to_string())?;
        if cli != golden {
            return Err(format!("CLI output for {point:?} differs from {file}"));
        }
        let served = runtime.block_on(async {
            let resp = hopf_atlas::service::router(None)
                .oneshot(Request::get(format!("/api/fiber?{query}")).body(Body::empty()).unwrap())
                .await
                .unwrap();
            resp.into_body().collect().await.unwrap().to_bytes().to_vec()
        });
        if served != cli.as_bytes() {
            return Err(format!("service output for {query} differs from CLI output"));
        }
        checked += 1;
    }
    Ok(format!("{checked} fixtures match byte-for-byte; service output equals CLI output"))
}

fn c12_worked_product() -> Outcome {
    let got = mul(Quaternion::new(3.0, 0.0, 2.0, 0.0), Quaternion::new(1.0, -4.0, 0.0, 1.0));
    let want = Quaternion::new(3.0, -10.0, 2.0, 11.0);
    check(got == want, format!("(3,0,2,0)(1,-4,0,1) = {:?}", got.to_array()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("hopf form equivalence", c1_hopf_forms),
        ("fiber correctness", c2_fiber_correctness),
        ("gauge equivalence", c3_gauge_equivalence),
        ("rotation homomorphism", c4_homomorphism),
        ("double cover and scale invariance", c5_double_cover_and_scale),
        ("axis/angle", c6_axis_angle),
        ("circle preservation", c7_circle_preservation),
        ("known projections", c8_known_projections),
        ("linkage", c9_linkage),
        ("psi target", c10_psi_target),
        ("CLI/service golden output", c11_golden),
        ("worked product", c12_worked_product),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
