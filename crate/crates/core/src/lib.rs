//! Quaternion rotations, the Hopf map and its fibers, stereographic
//! projection, and linkage checks for projected fibers.
//!
//! The library is pure: every operation is a function of its inputs and the
//! process-wide [`config::Tolerances`] record.

pub mod cli;
pub mod config;
pub mod document;
pub mod error;
pub mod hopf;
pub mod linkage;
pub mod quat;
pub mod rotation;
pub mod service;
pub mod stereo;

pub use config::Tolerances;
pub use error::{HopfError, Result};
pub use hopf::{
    fiber, hopf, hopf_checked, hopf_components, hopf_original, hopf_quat, FiberGauge,
    FiberSamples, GaugeKind, PointS2, PointS3,
};
pub use linkage::{
    axis_link_report, gauss_linking, link_fiber_point, pairwise_link_check, psi, LinkReport,
    PairLinkReport,
    TransformedLink,
};
pub use quat::{exp_i, mul, Quaternion, UnitQuaternion};
pub use rotation::{
    from_axis_angle, rotate, rotations_taking_x_to, to_axis_angle, to_matrix, AxisAngle, Point3,
    RotationClass,
};
pub use stereo::{
    fit_circle_or_line, proj_s2, proj_s3, unproj_s2, unproj_s3, CircleOrLine3, Fit, Point2,
};
