//! C interface to the `weinorman` solver.
//!
//! Every object is an opaque handle created by a `wn_*_new` or `wn_solve_*`
//! call and released by the matching `wn_*_free`. Fallible calls return a
//! [`WnStatus`]; on failure [`wn_last_error`] describes the problem for the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use weinorman::reduction::emit_symbolic;
use weinorman::solver::{compare, oracle_adjoint, solve};
use weinorman::{plan_hierarchy, CoefficientPath, Error, Hierarchy, LieAlgebra, Mode, SolveOptions, Status, Trajectory};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidType = 3,
    /// No cominuscule node; plan in contact mode instead.
    ExcludedType = 4,
    InvalidInput = 5,
    Numerical = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WnMode {
    Cominuscule = 0,
    Contact = 1,
}

pub struct WnAlgebra(Arc<LieAlgebra>);

pub struct WnHierarchy(Arc<Hierarchy>);

pub struct WnTrajectory {
    trajectory: Trajectory,
    input: CoefficientPath,
    horizon: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code(e: &Error) -> WnStatus {
    match e {
        Error::InvalidDynkin(_) => WnStatus::InvalidType,
        Error::ExcludedType(_) | Error::RankOneContact(_) | Error::InvalidSigma(_) | Error::EmptySigma => {
            WnStatus::ExcludedType
        }
        Error::InvalidPath(_) | Error::Json(_) | Error::DimensionMismatch { .. } => WnStatus::InvalidInput,
        Error::InvalidArgument(_) | Error::OffGrid(_) | Error::BeyondBreakdown { .. } => WnStatus::InvalidArgument,
        Error::ThetaInversion(_) | Error::SliceLeak(_) | Error::NilpotencyViolation { .. } => WnStatus::Numerical,
        _ => WnStatus::Internal,
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), WnStatus>>(f: F) -> WnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WnStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside weinorman".into());
            WnStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, WnStatus>;
}

impl<T> OrStatus<T> for weinorman::Result<T> {
    fn or_status(self) -> Result<T, WnStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            code(&e)
        })
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, WnStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null pointer argument".into());
        WnStatus::NullPointer
    })
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, WnStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(WnStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not valid UTF-8".into());
        WnStatus::InvalidArgument
    })
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), WnStatus> {
    if out.is_null() {
        set_error("null output pointer".into());
        return Err(WnStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call; never null.
#[no_mangle]
pub extern "C" fn wn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Build the algebra of a type such as `"A2"`, `"B3xA1"` or `"A1+T2"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wn_algebra_new(spec: *const c_char, out: *mut *mut WnAlgebra) -> WnStatus {
    guard(|| {
        let alg = LieAlgebra::from_spec(text(spec)?).or_status()?;
        put(out, WnAlgebra(Arc::new(alg)))
    })
}

/// # Safety
/// `alg` must come from [`wn_algebra_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wn_algebra_free(alg: *mut WnAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra, 0 for a null handle.
///
/// # Safety
/// `alg` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wn_algebra_dim(alg: *const WnAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.dim())
}

/// Plan the factorization of `alg`.
///
/// # Safety
/// `alg` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wn_hierarchy_new(alg: *const WnAlgebra, mode: WnMode, out: *mut *mut WnHierarchy) -> WnStatus {
    guard(|| {
        let alg = deref(alg)?;
        let mode = match mode {
            WnMode::Cominuscule => Mode::Cominuscule,
            WnMode::Contact => Mode::Contact,
        };
        let h = plan_hierarchy(alg.0.clone(), mode).or_status()?;
        put(out, WnHierarchy(Arc::new(h)))
    })
}

/// # Safety
/// `h` must come from [`wn_hierarchy_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wn_hierarchy_free(h: *mut WnHierarchy) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of factors `r`, 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wn_hierarchy_factor_count(h: *const WnHierarchy) -> usize {
    h.as_ref().map_or(0, |h| h.0.factor_count())
}

/// Symbolic right-hand sides as a JSON string; release it with
/// [`wn_string_free`].
///
/// # Safety
/// `h` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wn_hierarchy_emit_json(h: *const WnHierarchy, out: *mut *mut c_char) -> WnStatus {
    guard(|| {
        let h = deref(h)?;
        if out.is_null() {
            set_error("null output pointer".into());
            return Err(WnStatus::NullPointer);
        }
        let doc = emit_symbolic(&h.0).or_status()?;
        let s = CString::new(doc.to_json().to_string()).map_err(|_| WnStatus::Internal)?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn run(h: &WnHierarchy, input: CoefficientPath, step: f64, horizon: f64) -> Result<WnTrajectory, WnStatus> {
    let trajectory = solve(h.0.clone(), &input, &SolveOptions::new(step, horizon)).or_status()?;
    Ok(WnTrajectory {
        trajectory,
        input,
        horizon,
    })
}

/// Integrate a seeded random sinusoidal input on `[0, horizon]`.
///
/// A breakdown is not an error: check [`wn_trajectory_status`].
///
/// # Safety
/// `h` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn wn_solve_random(
    h: *const WnHierarchy,
    seed: u64,
    step: f64,
    horizon: f64,
    out: *mut *mut WnTrajectory,
) -> WnStatus {
    guard(|| {
        let h = deref(h)?;
        let x = CoefficientPath::random_sinusoidal(h.0.algebra(), seed, horizon).or_status()?;
        put(out, run(h, x, step, horizon)?)
    })
}

/// Integrate a constant input given by `len` coefficients in basis order.
///
/// # Safety
/// `coeffs` must point to `len` doubles; `h` and `out` as for
/// [`wn_solve_random`].
#[no_mangle]
pub unsafe extern "C" fn wn_solve_constant(
    h: *const WnHierarchy,
    coeffs: *const f64,
    len: usize,
    step: f64,
    horizon: f64,
    out: *mut *mut WnTrajectory,
) -> WnStatus {
    guard(|| {
        let h = deref(h)?;
        let c = deref(coeffs).map(|p| std::slice::from_raw_parts(p, len))?;
        let x = CoefficientPath::constant(h.0.algebra(), c, horizon).or_status()?;
        put(out, run(h, x, step, horizon)?)
    })
}

/// Integrate an input described by JSON keyed by basis labels, the same
/// format the command line accepts.
///
/// # Safety
/// `json` must be a NUL-terminated string; `h` and `out` as for
/// [`wn_solve_random`].
#[no_mangle]
pub unsafe extern "C" fn wn_solve_json(
    h: *const WnHierarchy,
    json: *const c_char,
    step: f64,
    horizon: f64,
    out: *mut *mut WnTrajectory,
) -> WnStatus {
    guard(|| {
        let h = deref(h)?;
        let v: serde_json::Value = serde_json::from_str(text(json)?).map_err(Error::from).or_status()?;
        let x = CoefficientPath::from_json(h.0.algebra(), &v, horizon).or_status()?;
        put(out, run(h, x, step, horizon)?)
    })
}

/// # Safety
/// `tr` must come from a `wn_solve_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wn_trajectory_free(tr: *mut WnTrajectory) {
    if !tr.is_null() {
        drop(Box::from_raw(tr));
    }
}

/// 0 if the run completed, 1 on breakdown (filling `time` and `stage` when
/// non-null), -1 for a null handle.
///
/// # Safety
/// `tr` must be null or a live handle; `time` and `stage` null or writable.
#[no_mangle]
pub unsafe extern "C" fn wn_trajectory_status(tr: *const WnTrajectory, time: *mut f64, stage: *mut usize) -> i32 {
    let Some(tr) = tr.as_ref() else { return -1 };
    match tr.trajectory.status() {
        Status::Completed => 0,
        Status::Breakdown { time: t, stage: s } => {
            if !time.is_null() {
                *time = t;
            }
            if !stage.is_null() {
                *stage = s;
            }
            1
        }
    }
}

/// Number of stored grid points.
///
/// # Safety
/// `tr` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wn_trajectory_len(tr: *const WnTrajectory) -> usize {
    tr.as_ref().map_or(0, |t| t.trajectory.times().len())
}

/// Copy factor `f` (0-based) at grid point `n` into `buf` as a full
/// coefficient vector in basis order; `buf` must hold the algebra dimension.
///
/// # Safety
/// `tr` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn wn_trajectory_xi(
    tr: *const WnTrajectory,
    n: usize,
    f: usize,
    buf: *mut f64,
    len: usize,
) -> WnStatus {
    guard(|| {
        let tr = deref(tr)?;
        if buf.is_null() {
            set_error("null buffer".into());
            return Err(WnStatus::NullPointer);
        }
        let t = &tr.trajectory;
        if n >= t.times().len() || f >= t.factors().len() {
            set_error(format!("grid point {} or factor {} out of range", n, f));
            return Err(WnStatus::InvalidArgument);
        }
        let xi = t.xi(n, f);
        if len < xi.len() {
            set_error(format!("buffer holds {} values, need {}", len, xi.len()));
            return Err(WnStatus::InvalidArgument);
        }
        std::slice::from_raw_parts_mut(buf, xi.len()).copy_from_slice(&xi);
        Ok(())
    })
}

/// Compare the reconstructed product against a direct integration of the
/// adjoint equation and store the largest max-norm error in `sup_error`.
///
/// # Safety
/// `tr` must be a live handle and `sup_error` writable.
#[no_mangle]
pub unsafe extern "C" fn wn_trajectory_verify(tr: *const WnTrajectory, sup_error: *mut f64) -> WnStatus {
    guard(|| {
        let tr = deref(tr)?;
        if sup_error.is_null() {
            set_error("null output pointer".into());
            return Err(WnStatus::NullPointer);
        }
        let t = &tr.trajectory;
        let oracle = oracle_adjoint(t.hierarchy().algebra(), &tr.input, t.step(), tr.horizon).or_status()?;
        *sup_error = compare(t, &oracle).or_status()?.worst();
        Ok(())
    })
}

