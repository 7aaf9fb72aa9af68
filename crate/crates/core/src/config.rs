//! Central tolerance record.
//!
//! Every numeric threshold used by the library lives here. The process-wide
//! record is read once from `HOPF_ATLAS_TOL` (comma separated `key=value`
//! pairs, e.g. `unit_norm=1e-8,antipode=1e-7`) and falls back to the defaults.

use std::sync::OnceLock;

use crate::error::{HopfError, Result};

/// Name of the environment variable that overrides [`Tolerances::global`].
pub const TOLERANCE_ENV: &str = "HOPF_ATLAS_TOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a unit quaternion / sphere point from norm 1.
    pub unit_norm: f64,
    /// Inputs within this deviation from norm 1 are renormalized instead of rejected.
    pub normalize: f64,
    /// Algebraic identities (associativity, conjugate products).
    pub identity: f64,
    /// `1 + p1` at or below this switches the fiber gauge to `k`.
    pub antipode: f64,
    /// Distance from a projection pole below which projection is undefined.
    pub pole: f64,
    /// Relative collinearity residual below which a point set is a line.
    pub collinear: f64,
    /// Maximum accepted circle fit residual, relative to `max(1, radius)`.
    pub fit_residual: f64,
    /// Fiber samples this close to the S³ pole are left out of fits.
    pub pole_exclusion: f64,
    /// Parameter tolerance of the crossing bisection.
    pub bisection: f64,
    /// Minimum vertex/segment separation for the Gauss linking sum.
    pub proximity: f64,
    /// Minimum distance of a base point from `(±1,0,0)` for axis link reports,
    /// and minimum distance between two base points of a pair.
    pub base_separation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unit_norm: 1e-9,
            normalize: 1e-6,
            identity: 1e-12,
            antipode: 1e-8,
            pole: 1e-10,
            collinear: 1e-7,
            fit_residual: 1e-6,
            pole_exclusion: 1e-6,
            bisection: 1e-12,
            proximity: 1e-3,
            base_separation: 1e-6,
        }
    }
}

impl Tolerances {
    /// Process-wide record, initialised from [`TOLERANCE_ENV`] on first use.
    ///
    /// A malformed variable is ignored here; front ends that want to report it
    /// call [`Tolerances::from_env`] themselves before doing any work.
    pub fn global() -> &'static Tolerances {
        static GLOBAL: OnceLock<Tolerances> = OnceLock::new();
        GLOBAL.get_or_init(|| Self::from_env().unwrap_or_default())
    }

    pub fn from_env() -> Result<Tolerances> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(overrides) => Self::parse_overrides(&overrides),
            Err(_) => Ok(Self::default()),
        }
    }

    /// Applies `key=value` overrides on top of the defaults.
    pub fn parse_overrides(overrides: &str) -> Result<Tolerances> {
        let mut tol = Self::default();
        for item in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| {
                HopfError::Parse(format!("{TOLERANCE_ENV}: expected key=value, got `{item}`"))
            })?;
            let value: f64 = value.trim().parse().map_err(|_| {
                HopfError::Parse(format!("{TOLERANCE_ENV}: `{}` is not a number", value.trim()))
            })?;
            if !(value.is_finite() && value > 0.0) {
                return Err(HopfError::Parse(format!(
                    "{TOLERANCE_ENV}: `{key}` must be positive and finite"
                )));
            }
            let slot = match key.trim() {
                "unit_norm" => &mut tol.unit_norm,
                "normalize" => &mut tol.normalize,
                "identity" => &mut tol.identity,
                "antipode" => &mut tol.antipode,
                "pole" => &mut tol.pole,
                "collinear" => &mut tol.collinear,
                "fit_residual" => &mut tol.fit_residual,
                "pole_exclusion" => &mut tol.pole_exclusion,
                "bisection" => &mut tol.bisection,
                "proximity" => &mut tol.proximity,
                "base_separation" => &mut tol.base_separation,
                other => {
                    return Err(HopfError::Parse(format!(
                        "{TOLERANCE_ENV}: unknown tolerance `{other}`"
                    )))
                }
            };
            *slot = value;
        }
        Ok(tol)
    }
}
