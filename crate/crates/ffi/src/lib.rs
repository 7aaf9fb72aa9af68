//! C ABI for `hopf-atlas`.
//!
//! Every fallible entry point returns a [`HopfStatus`]; on failure the
//! message is available from [`hopf_last_error_message`] on the same
//! thread. Fibers are opaque [`HopfFiber`] handles released with
//! [`hopf_fiber_free`]; strings returned by the library are released with
//! [`hopf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hopf_atlas::document::FiberDocument;
use hopf_atlas::{
    hopf_checked, pairwise_link_check, rotate, GaugeKind, HopfError, Point3, PointS2, Quaternion,
    TransformedLink,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Pole = 3,
    Proximity = 4,
    Parse = 5,
    Fit = 6,
    /// A computed result contradicted a structural guarantee, or a buffer
    /// was too small.
    Internal = 7,
    /// A Rust panic was caught at the boundary.
    Panic = 8,
}

/// Gauge used to parametrize a fiber.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HopfGauge {
    R1 = 0,
    R2 = 1,
    /// `R1`, switching to the `k` gauge at `(-1,0,0)`.
    Auto = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HopfQuat {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HopfVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Summary of a pairwise linking check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HopfLinkResult {
    /// `|gauss_direct|` rounds to 1.
    pub linked: bool,
    /// The crossing test on the transformed pair gives the same verdict.
    pub verdicts_agree: bool,
    /// Gauss linking number of the two projected fibers.
    pub gauss_direct: f64,
    /// Base point of the transformed second fiber.
    pub transformed_base: HopfVec3,
    /// The transformed second fiber is the x-axis (antipodal base points).
    pub axis_line: bool,
}

/// Opaque handle to a sampled and projected fiber.
pub struct HopfFiber {
    doc: FiberDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &HopfError) -> HopfStatus {
    match err {
        HopfError::Domain(_) => HopfStatus::Domain,
        HopfError::Pole(_) => HopfStatus::Pole,
        HopfError::Proximity(_) => HopfStatus::Proximity,
        HopfError::Parse(_) => HopfStatus::Parse,
        HopfError::Fit { .. } => HopfStatus::Fit,
        HopfError::Consistency(_) => HopfStatus::Internal,
    }
}

enum Failure {
    Null(&'static str),
    Hopf(HopfError),
    Internal(String),
}

impl From<HopfError> for Failure {
    fn from(e: HopfError) -> Self {
        Failure::Hopf(e)
    }
}

/// Runs `f`, translating errors and panics into a status and the
/// thread-local error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HopfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HopfStatus::Ok
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("null pointer passed as `{name}`"));
            HopfStatus::NullPointer
        }
        Ok(Err(Failure::Hopf(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Internal(msg))) => {
            set_last_error(msg);
            HopfStatus::Internal
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            HopfStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

fn quat(q: HopfQuat) -> Quaternion {
    Quaternion::new(q.a, q.b, q.c, q.d)
}

fn vec3(p: Point3) -> HopfVec3 {
    HopfVec3 { x: p.x, y: p.y, z: p.z }
}

fn s2(p: HopfVec3) -> Result<PointS2, Failure> {
    Ok(PointS2::new(p.x, p.y, p.z)?)
}

/// Message of the last failed call on this thread, or NULL after a
/// successful call. The pointer stays valid until the next call into the
/// library on this thread.
#[no_mangle]
pub extern "C" fn hopf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hopf_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Writes the quaternion product `p·q` to `out`.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `HopfQuat`.
#[no_mangle]
pub unsafe extern "C" fn hopf_quat_mul(p: HopfQuat, q: HopfQuat, out: *mut HopfQuat) -> HopfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let r = quat(p) * quat(q);
        *out = HopfQuat { a: r.a, b: r.b, c: r.c, d: r.d };
        Ok(())
    })
}

/// Rotates `p` by the nonzero quaternion `r` (`r p r⁻¹`).
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `HopfVec3`.
#[no_mangle]
pub unsafe extern "C" fn hopf_rotate(r: HopfQuat, p: HopfVec3, out: *mut HopfVec3) -> HopfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = vec3(rotate(quat(r), Point3::new(p.x, p.y, p.z))?);
        Ok(())
    })
}

/// Hopf map of a unit quaternion (renormalized within tolerance).
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `HopfVec3`.
#[no_mangle]
pub unsafe extern "C" fn hopf_map(q: HopfQuat, out: *mut HopfVec3) -> HopfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = vec3(hopf_checked(quat(q))?.to_point3());
        Ok(())
    })
}

/// Samples the fiber over `base`, projects it and fits its shape. On
/// success `*out` receives a handle to release with [`hopf_fiber_free`].
///
/// # Safety
/// `out` must be NULL or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_new(
    base: HopfVec3,
    samples: usize,
    gauge: HopfGauge,
    out: *mut *mut HopfFiber,
) -> HopfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let kind = match gauge {
            HopfGauge::R1 => GaugeKind::R1,
            HopfGauge::R2 => GaugeKind::R2,
            HopfGauge::Auto => GaugeKind::Auto,
        };
        let doc = FiberDocument::build(s2(base)?, kind, samples)?;
        *out = Box::into_raw(Box::new(HopfFiber { doc }));
        Ok(())
    })
}

/// Releases a fiber handle. NULL is ignored.
///
/// # Safety
/// `fiber` must be NULL or a handle from [`hopf_fiber_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_free(fiber: *mut HopfFiber) {
    if !fiber.is_null() {
        drop(Box::from_raw(fiber));
    }
}

/// Number of samples in the fiber, or 0 for NULL.
///
/// # Safety
/// `fiber` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_len(fiber: *const HopfFiber) -> usize {
    fiber.as_ref().map_or(0, |f| f.doc.points_s3.len())
}

/// Copies the S³ samples as `len` consecutive `(a, b, c, d)` quadruples.
/// `capacity` is the number of doubles available at `buf`.
///
/// # Safety
/// `fiber` must be NULL or a live handle; `buf` must be NULL or valid for
/// `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_points_s3(fiber: *const HopfFiber, buf: *mut f64, capacity: usize) -> HopfStatus {
    guard(|| {
        let f = in_ref(fiber, "fiber")?;
        let flat: Vec<f64> = f.doc.points_s3.iter().flatten().copied().collect();
        copy_out(&flat, buf, capacity)
    })
}

/// Copies the projected samples as `len` consecutive `(x, y, z)` triples.
/// A sample at the projection pole is written as three NaNs.
///
/// # Safety
/// `fiber` must be NULL or a live handle; `buf` must be NULL or valid for
/// `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_projected(fiber: *const HopfFiber, buf: *mut f64, capacity: usize) -> HopfStatus {
    guard(|| {
        let f = in_ref(fiber, "fiber")?;
        let flat: Vec<f64> = f
            .doc
            .projected
            .iter()
            .flat_map(|p| p.unwrap_or([f64::NAN; 3]))
            .collect();
        copy_out(&flat, buf, capacity)
    })
}

unsafe fn copy_out(values: &[f64], buf: *mut f64, capacity: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(Failure::Null("buf"));
    }
    if capacity < values.len() {
        return Err(Failure::Internal(format!(
            "buffer holds {capacity} doubles, {} needed",
            values.len()
        )));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

/// The fiber document as JSON, identical to the command-line output.
/// Returns NULL for a NULL handle; free the result with
/// [`hopf_string_free`].
///
/// # Safety
/// `fiber` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hopf_fiber_to_json(fiber: *const HopfFiber) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        let f = in_ref(fiber, "fiber")?;
        out = CString::new(f.doc.to_json())
            .map_err(|e| Failure::Internal(e.to_string()))?
            .into_raw();
        Ok(())
    });
    out
}

/// Releases a string returned by the library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hopf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks that the projected fibers over `a` and `b` are linked.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `HopfLinkResult`.
#[no_mangle]
pub unsafe extern "C" fn hopf_link_check(
    a: HopfVec3,
    b: HopfVec3,
    samples: usize,
    out: *mut HopfLinkResult,
) -> HopfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let rep = pairwise_link_check(s2(a)?, s2(b)?, samples)?;
        *out = HopfLinkResult {
            linked: rep.linked,
            verdicts_agree: rep.verdicts_agree,
            gauss_direct: rep.gauss_direct,
            transformed_base: vec3(rep.transformed_base.to_point3()),
            axis_line: rep.transformed_report == TransformedLink::AxisLine,
        };
        Ok(())
    })
}

/// Borrowed view of a C string, for tests and callers in Rust.
///
/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
pub unsafe fn c_str_to_string(s: *const c_char) -> Option<String> {
    (!s.is_null()).then(|| CStr::from_ptr(s).to_string_lossy().into_owned())
}
