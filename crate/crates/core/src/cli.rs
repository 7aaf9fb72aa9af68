//! Command-line front end.
//!
//! Commands render their output to a string so the binary, the tests and
//! the service all share one serialization path.

use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::document::{to_json, FiberDocument};
use crate::error::HopfError;
use crate::hopf::{GaugeKind, PointS2, DEFAULT_FIBER_SAMPLES};
use crate::linkage::pairwise_link_check;
use crate::quat::{Quaternion, UnitQuaternion};
use crate::rotation::{
    from_axis_angle, to_axis_angle, to_matrix, AxisAngle, Point3, RotationClass,
};

/// Exit status for malformed input.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for inputs that violate a mathematical precondition.
pub const EXIT_DOMAIN: i32 = 3;
/// Exit status for I/O and server failures.
pub const EXIT_IO: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "hopf-atlas", version, about = "Hopf fibers, rotations and linked circles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the fiber over a point of S² and project it to ℝ³.
    Fiber(FiberArgs),
    /// Check that the projected fibers over two points are linked.
    Link(LinkArgs),
    /// Rotate a point by a unit quaternion or an axis/angle pair.
    Rotate(RotateArgs),
    /// Axis and angle of the rotation given by a unit quaternion.
    AxisAngle(AxisAngleArgs),
    /// Compose two rotations: the result applies the second, then the first.
    Compose(ComposeArgs),
    /// Serve the JSON API (and optional static assets) over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    R1,
    R2,
    Auto,
}

impl From<GaugeArg> for GaugeKind {
    fn from(g: GaugeArg) -> Self {
        match g {
            GaugeArg::R1 => GaugeKind::R1,
            GaugeArg::R2 => GaugeKind::R2,
            GaugeArg::Auto => GaugeKind::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    /// Base point `p1,p2,p3` on S² (renormalized within 1e-6).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub point: [f64; 3],
    #[arg(long, default_value_t = DEFAULT_FIBER_SAMPLES)]
    pub samples: usize,
    /// `auto` uses r1, switching to k at (-1,0,0).
    #[arg(long, value_enum, default_value_t = GaugeArg::Auto)]
    pub gauge: GaugeArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub pa: [f64; 3],
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub pb: [f64; 3],
    #[arg(long, default_value_t = DEFAULT_FIBER_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RotationChoice {
    /// Unit quaternion `a,b,c,d`.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true,
          conflicts_with_all = ["axis", "angle"], required_unless_present = "axis")]
    pub quat: Option<[f64; 4]>,
    /// Rotation axis `x,y,z` (any nonzero length).
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, requires = "angle")]
    pub axis: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true, requires = "axis")]
    pub angle: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RotateArgs {
    #[command(flatten)]
    pub rotation: RotationChoice,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub point: [f64; 3],
    /// Read and write angles in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
pub struct AxisAngleArgs {
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    pub quat: [f64; 4],
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true,
          conflicts_with_all = ["axis1", "angle1"], required_unless_present = "axis1")]
    pub q1: Option<[f64; 4]>,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, requires = "angle1")]
    pub axis1: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true, requires = "axis1")]
    pub angle1: Option<f64>,
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true,
          conflicts_with_all = ["axis2", "angle2"], required_unless_present = "axis2")]
    pub q2: Option<[f64; 4]>,
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, requires = "angle2")]
    pub axis2: Option<[f64; 3]>,
    #[arg(long, allow_hyphen_values = true, requires = "axis2")]
    pub angle2: Option<f64>,
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1")]
    pub host: IpAddr,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    /// Directory of static assets served under `/`.
    #[arg(long)]
    pub assets: Option<PathBuf>,
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(parts) {
        let v: f64 = part.parse().map_err(|_| format!("`{part}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("`{part}` is not finite"));
        }
        *slot = v;
    }
    Ok(out)
}

pub fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    parse_floats::<3>(s)
}

pub fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    parse_floats::<4>(s)
}

/// A command failure with its process exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<HopfError> for CliError {
    fn from(e: HopfError) -> Self {
        let code = match e {
            HopfError::Parse(_) => EXIT_PARSE,
            _ => EXIT_DOMAIN,
        };
        CliError { code, message: e.to_string() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn base_point(v: [f64; 3], name: &str) -> Result<PointS2, HopfError> {
    PointS2::new(v[0], v[1], v[2]).map_err(|e| e.context(name))
}

fn unit_quat(v: [f64; 4], name: &str) -> Result<UnitQuaternion, HopfError> {
    UnitQuaternion::new(Quaternion::from(v)).map_err(|e| e.context(name))
}

fn angle_in(angle: f64, degrees: bool) -> f64 {
    if degrees {
        angle.to_radians()
    } else {
        angle
    }
}

fn angle_out(angle: f64, degrees: bool) -> f64 {
    if degrees {
        angle.to_degrees()
    } else {
        angle
    }
}

fn rotation_from(
    quat: Option<[f64; 4]>,
    axis: Option<[f64; 3]>,
    angle: Option<f64>,
    degrees: bool,
    name: &str,
) -> Result<UnitQuaternion, HopfError> {
    match (quat, axis, angle) {
        (Some(q), _, _) => unit_quat(q, name),
        (None, Some(a), Some(theta)) => {
            let aa = AxisAngle::from_vector(Point3::from(a), angle_in(theta, degrees))
                .map_err(|e| e.context(name))?;
            Ok(from_axis_angle(aa))
        }
        _ => Err(HopfError::Parse(format!("{name}: give a quaternion or an axis and angle"))),
    }
}

/// JSON description of a rotation.
#[derive(Debug, Serialize)]
pub struct RotationSummary {
    pub identity: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<Point3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl RotationSummary {
    fn of(r: UnitQuaternion, degrees: bool) -> Self {
        match to_axis_angle(r) {
            RotationClass::Identity => Self { identity: true, axis: None, angle: None },
            RotationClass::Rotation(aa) => Self {
                identity: false,
                axis: Some(aa.axis),
                angle: Some(angle_out(aa.angle, degrees)),
            },
        }
    }
}

#[derive(Serialize)]
struct RotateOutput {
    quaternion: UnitQuaternion,
    point: Point3,
    rotated: Point3,
}

#[derive(Serialize)]
struct ComposeOutput {
    quaternion: UnitQuaternion,
    #[serde(flatten)]
    rotation: RotationSummary,
    matrix: [[f64; 3]; 3],
}

pub fn cmd_fiber(args: &FiberArgs) -> Result<String, CliError> {
    let base = base_point(args.point, "--point")?;
    let doc = FiberDocument::build(base, args.gauge.into(), args.samples)?;
    Ok(match args.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    })
}

pub fn cmd_link(args: &LinkArgs) -> Result<String, CliError> {
    let a = base_point(args.pa, "--pa")?;
    let b = base_point(args.pb, "--pb")?;
    Ok(to_json(&pairwise_link_check(a, b, args.samples)?))
}

pub fn cmd_rotate(args: &RotateArgs) -> Result<String, CliError> {
    let choice = &args.rotation;
    let r = rotation_from(choice.quat, choice.axis, choice.angle, args.degrees, "rotation")?;
    let point = Point3::from(args.point);
    Ok(to_json(&RotateOutput { quaternion: r, point, rotated: r.rotate(point) }))
}

pub fn cmd_axis_angle(args: &AxisAngleArgs) -> Result<String, CliError> {
    let r = unit_quat(args.quat, "--quat")?;
    Ok(to_json(&RotationSummary::of(r, args.degrees)))
}

pub fn cmd_compose(args: &ComposeArgs) -> Result<String, CliError> {
    let first = rotation_from(args.q1, args.axis1, args.angle1, args.degrees, "first rotation")?;
    let second = rotation_from(args.q2, args.axis2, args.angle2, args.degrees, "second rotation")?;
    let product = first * second;
    Ok(to_json(&ComposeOutput {
        quaternion: product,
        rotation: RotationSummary::of(product, args.degrees),
        matrix: to_matrix(product),
    }))
}

/// Runs a non-server command and returns its output.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Fiber(a) => cmd_fiber(a),
        Command::Link(a) => cmd_link(a),
        Command::Rotate(a) => cmd_rotate(a),
        Command::AxisAngle(a) => cmd_axis_angle(a),
        Command::Compose(a) => cmd_compose(a),
        Command::Serve(_) => Err(CliError {
            code: EXIT_IO,
            message: "serve is not a one-shot command".into(),
        }),
    }
}
