//! C ABI over the limcyc toolkit.
//!
//! Every object crossing the boundary is an opaque handle created and freed
//! by this library. Functions return a [`LimcycStatus`] code; on failure a
//! thread-local message with the details is available through
//! [`limcyc_last_error_message`]. Structured results (criterion reports,
//! cycle reports) are returned as JSON strings to keep the surface small;
//! free them with [`limcyc_string_free`].

use limcyc::criteria::{self, ScanConfig};
use limcyc::cycles::{find_cycles, CycleError, SearchConfig, Stability};
use limcyc::field::{PlanarField, SystemSpec};
use limcyc::integrate::{integrate, Trajectory};
use limcyc::operators::{self, Region};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result code of every fallible C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimcycStatus {
    Ok = 0,
    /// A required pointer argument was null.
    ErrNullArgument = 1,
    /// A string argument was not valid UTF-8.
    ErrUtf8 = 2,
    /// Expression or JSON input failed to parse or validate.
    ErrParse = 3,
    /// A numeric argument violated a precondition.
    ErrInvalidArgument = 4,
    /// A denominator was singular at the requested point.
    ErrSingular = 5,
    /// The return map is undefined from the requested seed.
    ErrNoReturn = 6,
    /// Internal consistency failure (stability indicators disagree or a
    /// family closed form does not match).
    ErrInconsistent = 7,
    /// Index out of range.
    ErrRange = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: LimcycStatus, message: &str) -> LimcycStatus {
    set_error(message);
    status
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn limcyc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guard<F: FnOnce() -> LimcycStatus>(body: F) -> LimcycStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in limcyc".into());
            fail(LimcycStatus::ErrInvalidArgument, &msg)
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, LimcycStatus> {
    if ptr.is_null() {
        return Err(fail(LimcycStatus::ErrNullArgument, "string argument is null"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| fail(LimcycStatus::ErrUtf8, &format!("invalid UTF-8: {e}")))
}

fn write_out<T>(out: *mut T, value: T) -> LimcycStatus {
    if out.is_null() {
        return fail(LimcycStatus::ErrNullArgument, "output pointer is null");
    }
    unsafe { out.write(value) };
    LimcycStatus::Ok
}

/// Opaque planar vector field handle.
pub struct LimcycField {
    field: PlanarField,
}

/// Opaque integrated-orbit handle.
pub struct LimcycTrajectory {
    trajectory: Trajectory,
    samples: Vec<(f64, f64, f64)>,
}

/// Opaque set of detected cycles.
pub struct LimcycCycleSet {
    cycles: Vec<limcyc::cycles::Cycle>,
    n_center_regions: usize,
    n_skipped_seeds: usize,
}

/// Summary of one detected cycle.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LimcycCycleInfo {
    /// Ordinate of the cycle's crossing of the positive y-axis.
    pub y_star: f64,
    pub period: f64,
    /// |R'(y*)|; below 1 for attracting cycles.
    pub multiplier: f64,
    /// Integral of the divergence over one period.
    pub div_integral: f64,
    pub stability: LimcycStability,
    /// Nonzero when the cycle runs counterclockwise.
    pub counterclockwise: i32,
    /// Nonzero when every ray from the origin meets the cycle once.
    pub star_shaped: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimcycStability {
    Undetermined = 0,
    Attracting = 1,
    Repelling = 2,
}

/// Build a field from a system-spec JSON document:
/// `{"kind": "lienard_phase" | "lienard_plane" | "general",
///   "f": ..., "g": ..., "P": ..., "Q": ..., "label": ..., "family": ...}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. The returned handle must be released with [`limcyc_field_free`].
#[no_mangle]
pub unsafe extern "C" fn limcyc_field_from_json(
    json: *const c_char,
    out: *mut *mut LimcycField,
) -> LimcycStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let spec: SystemSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(LimcycStatus::ErrParse, &format!("bad system spec: {e}")),
        };
        match spec.build() {
            Ok(field) => {
                let handle = Box::new(LimcycField { field });
                write_out(out, Box::into_raw(handle))
            }
            Err(e) => fail(LimcycStatus::ErrParse, &format!("cannot build system: {e}")),
        }
    })
}

/// Build a general field directly from expression texts for P and Q.
///
/// # Safety
/// As [`limcyc_field_from_json`].
#[no_mangle]
pub unsafe extern "C" fn limcyc_field_from_exprs(
    p: *const c_char,
    q: *const c_char,
    out: *mut *mut LimcycField,
) -> LimcycStatus {
    guard(|| {
        let (p, q) = match (read_str(p), read_str(q)) {
            (Ok(p), Ok(q)) => (p, q),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match PlanarField::from_strings(p, q, "c api field") {
            Ok(field) => {
                let handle = Box::new(LimcycField { field });
                write_out(out, Box::into_raw(handle))
            }
            Err(e) => fail(LimcycStatus::ErrParse, &format!("cannot parse field: {e}")),
        }
    })
}

/// # Safety
/// `field` must come from a field constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn limcyc_field_free(field: *mut LimcycField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

unsafe fn field_ref<'a>(field: *const LimcycField) -> Result<&'a LimcycField, LimcycStatus> {
    field
        .as_ref()
        .ok_or_else(|| fail(LimcycStatus::ErrNullArgument, "field handle is null"))
}

/// Evaluate (P, Q) at a point.
///
/// # Safety
/// `field` must be a live handle; `p_out` and `q_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_field_eval(
    field: *const LimcycField,
    x: f64,
    y: f64,
    p_out: *mut f64,
    q_out: *mut f64,
) -> LimcycStatus {
    guard(|| {
        let handle = match field_ref(field) {
            Ok(h) => h,
            Err(s) => return s,
        };
        let (p, q) = handle.field.eval(x, y);
        let status = write_out(p_out, p);
        if status != LimcycStatus::Ok {
            return status;
        }
        write_out(q_out, q)
    })
}

/// Divergence P_x + Q_y at a point.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_field_divergence(
    field: *const LimcycField,
    x: f64,
    y: f64,
    out: *mut f64,
) -> LimcycStatus {
    guard(|| match field_ref(field) {
        Ok(h) => write_out(out, h.field.divergence(x, y)),
        Err(s) => s,
    })
}

/// The ray-rotation numerator alpha = P (x Q_x + y Q_y) - Q (x P_x + y P_y).
///
/// # Safety
/// `field` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_alpha(
    field: *const LimcycField,
    x: f64,
    y: f64,
    out: *mut f64,
) -> LimcycStatus {
    guard(|| match field_ref(field) {
        Ok(h) => write_out(out, operators::alpha(&h.field, x, y)),
        Err(s) => s,
    })
}

/// The stability operator nu = alpha / (y P - x Q). Fails with a singular
/// status where the denominator vanishes.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_nu(
    field: *const LimcycField,
    x: f64,
    y: f64,
    out: *mut f64,
) -> LimcycStatus {
    guard(|| {
        let handle = match field_ref(field) {
            Ok(h) => h,
            Err(s) => return s,
        };
        match operators::nu(&handle.field, x, y) {
            Ok(v) => write_out(out, v),
            Err(e) => fail(LimcycStatus::ErrSingular, &e.to_string()),
        }
    })
}

/// Angular speed (x Q - y P) / (x^2 + y^2).
///
/// # Safety
/// `field` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_angular_speed(
    field: *const LimcycField,
    x: f64,
    y: f64,
    out: *mut f64,
) -> LimcycStatus {
    guard(|| {
        let handle = match field_ref(field) {
            Ok(h) => h,
            Err(s) => return s,
        };
        if x * x + y * y <= operators::SINGULAR_TOL {
            return fail(LimcycStatus::ErrSingular, "angular speed is undefined at the origin");
        }
        write_out(out, operators::angular_speed(&handle.field, x, y))
    })
}

/// Integrate an orbit from (x0, y0) for `t_end` time units.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid. Release the result
/// with [`limcyc_trajectory_free`].
#[no_mangle]
pub unsafe extern "C" fn limcyc_integrate(
    field: *const LimcycField,
    x0: f64,
    y0: f64,
    t_end: f64,
    rtol: f64,
    atol: f64,
    out: *mut *mut LimcycTrajectory,
) -> LimcycStatus {
    guard(|| {
        let handle = match field_ref(field) {
            Ok(h) => h,
            Err(s) => return s,
        };
        if !(rtol > 0.0 && atol > 0.0 && t_end > 0.0) {
            return fail(
                LimcycStatus::ErrInvalidArgument,
                "t_end, rtol and atol must all be positive",
            );
        }
        let trajectory = integrate(&handle.field, (x0, y0), t_end, rtol, atol);
        let samples = trajectory.samples();
        let boxed = Box::new(LimcycTrajectory { trajectory, samples });
        write_out(out, Box::into_raw(boxed))
    })
}

/// Number of stored samples (accepted steps plus the initial point).
///
/// # Safety
/// `trajectory` must be a live handle (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn limcyc_trajectory_len(trajectory: *const LimcycTrajectory) -> usize {
    trajectory.as_ref().map_or(0, |t| t.samples.len())
}

/// Fetch the i-th stored sample.
///
/// # Safety
/// `trajectory` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_trajectory_sample(
    trajectory: *const LimcycTrajectory,
    index: usize,
    t_out: *mut f64,
    x_out: *mut f64,
    y_out: *mut f64,
) -> LimcycStatus {
    guard(|| {
        let Some(handle) = trajectory.as_ref() else {
            return fail(LimcycStatus::ErrNullArgument, "trajectory handle is null");
        };
        let Some(&(t, x, y)) = handle.samples.get(index) else {
            return fail(
                LimcycStatus::ErrRange,
                &format!("sample index {index} out of range ({})", handle.samples.len()),
            );
        };
        for (ptr, v) in [(t_out, t), (x_out, x), (y_out, y)] {
            let status = write_out(ptr, v);
            if status != LimcycStatus::Ok {
                return status;
            }
        }
        LimcycStatus::Ok
    })
}

/// Dense-output state at an arbitrary time inside the covered interval.
///
/// # Safety
/// `trajectory` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_trajectory_at(
    trajectory: *const LimcycTrajectory,
    t: f64,
    x_out: *mut f64,
    y_out: *mut f64,
) -> LimcycStatus {
    guard(|| {
        let Some(handle) = trajectory.as_ref() else {
            return fail(LimcycStatus::ErrNullArgument, "trajectory handle is null");
        };
        match handle.trajectory.sample(t) {
            Some([x, y]) => {
                let status = write_out(x_out, x);
                if status != LimcycStatus::Ok {
                    return status;
                }
                write_out(y_out, y)
            }
            None => fail(
                LimcycStatus::ErrRange,
                &format!("t = {t} lies outside the integrated interval"),
            ),
        }
    })
}

/// # Safety
/// `trajectory` must come from [`limcyc_integrate`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn limcyc_trajectory_free(trajectory: *mut LimcycTrajectory) {
    if !trajectory.is_null() {
        drop(Box::from_raw(trajectory));
    }
}

/// Detect, refine and classify the limit cycles crossing the positive
/// y-axis with ordinates between `y_min` and `y_max`.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid. Release the result
/// with [`limcyc_cycle_set_free`].
#[no_mangle]
pub unsafe extern "C" fn limcyc_find_cycles(
    field: *const LimcycField,
    y_min: f64,
    y_max: f64,
    seeds: usize,
    out: *mut *mut LimcycCycleSet,
) -> LimcycStatus {
    guard(|| {
        let handle = match field_ref(field) {
            Ok(h) => h,
            Err(s) => return s,
        };
        let cfg = SearchConfig::default();
        match find_cycles(&handle.field, y_min, y_max, seeds, &cfg) {
            Ok(search) => {
                let boxed = Box::new(LimcycCycleSet {
                    cycles: search.cycles,
                    n_center_regions: search.center_regions.len(),
                    n_skipped_seeds: search.skipped_seeds.len(),
                });
                write_out(out, Box::into_raw(boxed))
            }
            Err(e @ CycleError::InconsistentIndicators { .. }) => {
                fail(LimcycStatus::ErrInconsistent, &e.to_string())
            }
            Err(e @ CycleError::BadRange { .. }) => {
                fail(LimcycStatus::ErrInvalidArgument, &e.to_string())
            }
            Err(e) => fail(LimcycStatus::ErrNoReturn, &e.to_string()),
        }
    })
}

/// Number of detected cycles.
///
/// # Safety
/// `set` must be a live handle (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn limcyc_cycle_set_len(set: *const LimcycCycleSet) -> usize {
    set.as_ref().map_or(0, |s| s.cycles.len())
}

/// Number of center regions flagged during the search (continua of periodic
/// orbits are reported this way instead of as cycles).
///
/// # Safety
/// `set` must be a live handle (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn limcyc_cycle_set_center_regions(set: *const LimcycCycleSet) -> usize {
    set.as_ref().map_or(0, |s| s.n_center_regions)
}

/// Seeds whose return map was undefined within the time budget.
///
/// # Safety
/// `set` must be a live handle (or null, which yields 0).
#[no_mangle]
pub unsafe extern "C" fn limcyc_cycle_set_skipped_seeds(set: *const LimcycCycleSet) -> usize {
    set.as_ref().map_or(0, |s| s.n_skipped_seeds)
}

/// Summary of the i-th cycle, ascending in y*.
///
/// # Safety
/// `set` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn limcyc_cycle_set_get(
    set: *const LimcycCycleSet,
    index: usize,
    out: *mut LimcycCycleInfo,
) -> LimcycStatus {
    guard(|| {
        let Some(handle) = set.as_ref() else {
            return fail(LimcycStatus::ErrNullArgument, "cycle set handle is null");
        };
        let Some(cycle) = handle.cycles.get(index) else {
            return fail(
                LimcycStatus::ErrRange,
                &format!("cycle index {index} out of range ({})", handle.cycles.len()),
            );
        };
        let info = LimcycCycleInfo {
            y_star: cycle.y_star,
            period: cycle.period,
            multiplier: cycle.multiplier,
            div_integral: cycle.div_integral,
            stability: match cycle.stability {
                Stability::Attracting => LimcycStability::Attracting,
                Stability::Repelling => LimcycStability::Repelling,
                Stability::Undetermined => LimcycStability::Undetermined,
            },
            counterclockwise: matches!(
                cycle.orientation,
                limcyc::cycles::OrientationSense::Counterclockwise
            ) as i32,
            star_shaped: cycle.star_shaped as i32,
        };
        write_out(out, info)
    })
}

/// # Safety
/// `set` must come from [`limcyc_find_cycles`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn limcyc_cycle_set_free(set: *mut LimcycCycleSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

fn string_to_c(out: *mut *mut c_char, text: String) -> LimcycStatus {
    match CString::new(text) {
        Ok(cstring) => write_out(out, cstring.into_raw()),
        Err(_) => fail(LimcycStatus::ErrParse, "report contained an interior NUL"),
    }
}

/// Run every applicable uniqueness criterion on a system-spec JSON document
/// and return the reports as a JSON array (free with
/// [`limcyc_string_free`]). The scan region is the square
/// [-region_half, region_half]^2 at the given grid resolution.
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string; `out_json` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn limcyc_check_criteria_json(
    spec_json: *const c_char,
    region_half: f64,
    resolution: usize,
    out_json: *mut *mut c_char,
) -> LimcycStatus {
    guard(|| {
        let text = match read_str(spec_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec: SystemSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(LimcycStatus::ErrParse, &format!("bad system spec: {e}")),
        };
        if !(region_half > 0.0) || resolution < 8 {
            return fail(
                LimcycStatus::ErrInvalidArgument,
                "region_half must be positive and resolution at least 8",
            );
        }
        let scan = ScanConfig::default();
        match criteria::run_all(&spec, Region::square(region_half), resolution, &scan) {
            Ok(reports) => {
                let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
                string_to_c(out_json, json)
            }
            Err(e @ criteria::CriteriaError::ClosedFormMismatch { .. }) => {
                fail(LimcycStatus::ErrInconsistent, &e.to_string())
            }
            Err(e) => fail(LimcycStatus::ErrParse, &e.to_string()),
        }
    })
}

/// Detect cycles for a system-spec JSON document and return the full cycle
/// reports (including period samples) as JSON. Free the string with
/// [`limcyc_string_free`].
///
/// # Safety
/// `spec_json` must be a valid NUL-terminated string; `out_json` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn limcyc_cycles_json(
    spec_json: *const c_char,
    y_min: f64,
    y_max: f64,
    seeds: usize,
    out_json: *mut *mut c_char,
) -> LimcycStatus {
    guard(|| {
        let text = match read_str(spec_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let spec: SystemSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => return fail(LimcycStatus::ErrParse, &format!("bad system spec: {e}")),
        };
        let field = match spec.build() {
            Ok(f) => f,
            Err(e) => return fail(LimcycStatus::ErrParse, &format!("cannot build system: {e}")),
        };
        let cfg = SearchConfig::default();
        match find_cycles(&field, y_min, y_max, seeds, &cfg) {
            Ok(search) => {
                let reports: Vec<_> = search.cycles.iter().map(|c| c.report()).collect();
                let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
                string_to_c(out_json, json)
            }
            Err(e @ CycleError::InconsistentIndicators { .. }) => {
                fail(LimcycStatus::ErrInconsistent, &e.to_string())
            }
            Err(e) => fail(LimcycStatus::ErrInvalidArgument, &e.to_string()),
        }
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `text` must come from a limcyc function returning `char *` and not be
/// freed twice.
#[no_mangle]
pub unsafe extern "C" fn limcyc_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
