//! C interface to `riccati_fem`.
//!
//! Every fallible function returns an [`RfStatus`]. On failure the message is
//! kept per thread and can be read with [`rf_last_error`]. Objects are
//! opaque handles owned by the caller and released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use riccati_fem::linalg::{solve_lyapunov, LinalgError, Matrix};
use riccati_fem::models::{scalar_sigma, ModelError};
use riccati_fem::riccati::{solve_care, CareOptions, CareProblem, RiccatiError};
use riccati_fem::study::{run_study, write_csv, Case, StudyConfig, StudyError, StudyResult};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotConverged = 4,
    Unstable = 5,
    Singular = 6,
    Io = 7,
    Panic = 8,
}

/// Dense row-major matrix.
pub struct RfMatrix(Matrix);

/// Outcome of a convergence study.
pub struct RfStudyResult(StudyResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: RfStatus, msg: impl Into<String>) -> RfStatus {
    set_error(msg);
    status
}

fn linalg_status(e: &LinalgError) -> RfStatus {
    match e {
        LinalgError::NotSpd { .. } | LinalgError::Singular { .. } => RfStatus::Singular,
        LinalgError::NoConvergence { .. } => RfStatus::NotConverged,
        LinalgError::UnstableA { .. } => RfStatus::Unstable,
        LinalgError::DimensionMismatch { .. } => RfStatus::DimensionMismatch,
        LinalgError::NonFinite => RfStatus::InvalidArgument,
    }
}

fn riccati_status(e: &RiccatiError) -> RfStatus {
    match e {
        RiccatiError::Linalg(l) => linalg_status(l),
        RiccatiError::Dimension(_) => RfStatus::DimensionMismatch,
        RiccatiError::InvalidConfig(_) => RfStatus::InvalidArgument,
        RiccatiError::NotStabilizing { .. } => RfStatus::Unstable,
        RiccatiError::MaxIterExceeded { .. }
        | RiccatiError::HorizonExceeded { .. }
        | RiccatiError::StepRejected { .. } => RfStatus::NotConverged,
    }
}

fn model_status(e: &ModelError) -> RfStatus {
    match e {
        ModelError::Linalg(l) => linalg_status(l),
        ModelError::Riccati(r) => riccati_status(r),
        ModelError::Dimension(_) => RfStatus::DimensionMismatch,
        _ => RfStatus::InvalidArgument,
    }
}

fn study_status(e: &StudyError) -> RfStatus {
    match e {
        StudyError::Model(m) => model_status(m),
        StudyError::Io(_) => RfStatus::Io,
        _ => RfStatus::InvalidArgument,
    }
}

/// Runs `f`, converting panics into [`RfStatus::Panic`].
fn guard(f: impl FnOnce() -> RfStatus) -> RfStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(RfStatus::Panic, msg)
        }
    }
}

unsafe fn matrix_ref<'a>(m: *const RfMatrix, name: &str) -> Result<&'a Matrix, RfStatus> {
    match m.as_ref() {
        Some(m) => Ok(&m.0),
        None => Err(fail(RfStatus::NullPointer, format!("{name} is null"))),
    }
}

unsafe fn str_arg<'a>(s: *const c_char, name: &str) -> Result<&'a str, RfStatus> {
    if s.is_null() {
        return Err(fail(RfStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(RfStatus::InvalidArgument, format!("{name} is not valid UTF-8")))
}

fn put<T>(out: *mut *mut T, value: T) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(value)) };
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn rf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a `rows x cols` matrix from row-major `data`; `data` may be null
/// for a zero matrix.
///
/// # Safety
/// `data` must point to `rows * cols` doubles when non-null; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_matrix_new(
    rows: usize,
    cols: usize,
    data: *const f64,
    out: *mut *mut RfMatrix,
) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return fail(RfStatus::NullPointer, "out is null");
        }
        let Some(len) = rows.checked_mul(cols) else {
            return fail(RfStatus::InvalidArgument, "matrix size overflows");
        };
        let m = if data.is_null() {
            Matrix::zeros(rows, cols)
        } else {
            Matrix::from_vec(rows, cols, std::slice::from_raw_parts(data, len).to_vec())
        };
        put(out, RfMatrix(m));
        RfStatus::Ok
    })
}

/// Releases a matrix; null is ignored.
///
/// # Safety
/// `m` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rf_matrix_free(m: *mut RfMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Row count, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_matrix_rows(m: *const RfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// Column count, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_matrix_cols(m: *const RfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must be a live handle and `value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_matrix_get(m: *const RfMatrix, row: usize, col: usize, value: *mut f64) -> RfStatus {
    guard(|| {
        let m = match matrix_ref(m, "matrix") {
            Ok(m) => m,
            Err(s) => return s,
        };
        if value.is_null() {
            return fail(RfStatus::NullPointer, "value is null");
        }
        if row >= m.rows() || col >= m.cols() {
            return fail(
                RfStatus::InvalidArgument,
                format!("index ({row}, {col}) outside {}x{}", m.rows(), m.cols()),
            );
        }
        *value = m[(row, col)];
        RfStatus::Ok
    })
}

/// Copies all entries row-major into `buf`, which holds `len` doubles.
///
/// # Safety
/// `m` must be a live handle and `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rf_matrix_copy(m: *const RfMatrix, buf: *mut f64, len: usize) -> RfStatus {
    guard(|| {
        let m = match matrix_ref(m, "matrix") {
            Ok(m) => m,
            Err(s) => return s,
        };
        if buf.is_null() {
            return fail(RfStatus::NullPointer, "buf is null");
        }
        let src = m.as_slice();
        if len < src.len() {
            return fail(RfStatus::DimensionMismatch, format!("buffer holds {len}, need {}", src.len()));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
        RfStatus::Ok
    })
}

/// Solves `AᵀX + XA + Q = 0`.
///
/// # Safety
/// `a`, `q` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_solve_lyapunov(
    a: *const RfMatrix,
    q: *const RfMatrix,
    out: *mut *mut RfMatrix,
) -> RfStatus {
    guard(|| {
        let (a, q) = match (matrix_ref(a, "a"), matrix_ref(q, "q")) {
            (Ok(a), Ok(q)) => (a, q),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        if out.is_null() {
            return fail(RfStatus::NullPointer, "out is null");
        }
        if a.rows() != a.cols() {
            return fail(RfStatus::DimensionMismatch, "a is not square");
        }
        match solve_lyapunov(a, q) {
            Ok(x) => {
                put(out, RfMatrix(x));
                RfStatus::Ok
            }
            Err(e) => fail(linalg_status(&e), e.to_string()),
        }
    })
}

/// Stabilizing solution of `AᵀP + PA − PBR⁻¹BᵀP + CᵀC = 0`.
/// `relative_residual` may be null.
///
/// # Safety
/// Matrix arguments must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_solve_care(
    a: *const RfMatrix,
    b: *const RfMatrix,
    c: *const RfMatrix,
    r: *const RfMatrix,
    out: *mut *mut RfMatrix,
    relative_residual: *mut f64,
) -> RfStatus {
    guard(|| {
        let args = [
            matrix_ref(a, "a"),
            matrix_ref(b, "b"),
            matrix_ref(c, "c"),
            matrix_ref(r, "r"),
        ];
        let mut ms = Vec::with_capacity(4);
        for m in args {
            match m {
                Ok(m) => ms.push(m),
                Err(s) => return s,
            }
        }
        if out.is_null() {
            return fail(RfStatus::NullPointer, "out is null");
        }
        if ms[0].rows() != ms[0].cols() {
            return fail(RfStatus::DimensionMismatch, "a is not square");
        }
        let problem = match CareProblem::from_lqr(ms[0], ms[1], ms[2], ms[3]) {
            Ok(p) => p,
            Err(e) => return fail(riccati_status(&e), e.to_string()),
        };
        match solve_care(&problem, &CareOptions::default()) {
            Ok(sol) => {
                if !relative_residual.is_null() {
                    *relative_residual = sol.relative_residual;
                }
                put(out, RfMatrix(sol.p));
                RfStatus::Ok
            }
            Err(e) => fail(riccati_status(&e), e.to_string()),
        }
    })
}

/// Nonnegative root of `−2aσ − gσ² + f = 0` (`a > 0`, `g > 0`, `f ≥ 0`).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_scalar_sigma(a: f64, f: f64, g: f64, out: *mut f64) -> RfStatus {
    guard(|| {
        if out.is_null() {
            return fail(RfStatus::NullPointer, "out is null");
        }
        match scalar_sigma(a, f, g) {
            Ok(s) => {
                *out = s;
                RfStatus::Ok
            }
            Err(e) => fail(model_status(&e), e.to_string()),
        }
    })
}

/// Parses a study configuration. Missing keys take the defaults of `case`.
fn parse_config(json: &str) -> Result<StudyConfig, String> {
    let mut value: serde_json::Value = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let obj = value.as_object_mut().ok_or("configuration must be a JSON object")?;
    let case_name = obj.get("case").and_then(|c| c.as_str()).ok_or("missing \"case\"")?;
    let case = Case::from_name(case_name).ok_or_else(|| format!("unknown case {case_name}"))?;
    let mut merged = serde_json::to_value(StudyConfig::for_case(case)).map_err(|e| e.to_string())?;
    let base = merged.as_object_mut().expect("config serializes to an object");
    for (k, v) in std::mem::take(obj) {
        if !base.contains_key(&k) {
            return Err(format!("unknown key \"{k}\""));
        }
        base.insert(k, v);
    }
    serde_json::from_value(merged).map_err(|e| e.to_string())
}

/// Runs a convergence study described by a JSON object. Keys follow the
/// library's `StudyConfig` field names; only `case` is required.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_study_run(json: *const c_char, out: *mut *mut RfStudyResult) -> RfStatus {
    guard(|| {
        let json = match str_arg(json, "json") {
            Ok(s) => s,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(RfStatus::NullPointer, "out is null");
        }
        let cfg = match parse_config(json) {
            Ok(c) => c,
            Err(e) => return fail(RfStatus::InvalidArgument, e),
        };
        match run_study(&cfg) {
            Ok(r) => {
                if let Some(f) = r.failures.first() {
                    let status = if f.solver { RfStatus::NotConverged } else { RfStatus::InvalidArgument };
                    return fail(status, format!("k={} n={}: {}", f.k, f.n, f.message));
                }
                put(out, RfStudyResult(r));
                RfStatus::Ok
            }
            Err(e) => fail(study_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `r` must come from [`rf_study_run`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rf_study_free(r: *mut RfStudyResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of `(k, n)` rows, or 0 for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rf_study_row_count(r: *const RfStudyResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.rows.len())
}

/// Fitted rate for order `k`. Fails with `InvalidArgument` if `k` was not
/// studied or too few errors cleared the floor.
///
/// # Safety
/// `r` must be a live handle and `rate` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rf_study_rate(r: *const RfStudyResult, k: usize, rate: *mut f64) -> RfStatus {
    guard(|| {
        let Some(r) = r.as_ref() else {
            return fail(RfStatus::NullPointer, "result is null");
        };
        if rate.is_null() {
            return fail(RfStatus::NullPointer, "rate is null");
        }
        match r.0.rate(k) {
            Some(v) => {
                *rate = v;
                RfStatus::Ok
            }
            None => fail(RfStatus::InvalidArgument, format!("no fitted rate for k={k}")),
        }
    })
}

/// Writes the study CSV to `path`.
///
/// # Safety
/// `r` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rf_study_write_csv(r: *const RfStudyResult, path: *const c_char) -> RfStatus {
    guard(|| {
        let Some(r) = r.as_ref() else {
            return fail(RfStatus::NullPointer, "result is null");
        };
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        match write_csv(&r.0, Path::new(path)) {
            Ok(()) => RfStatus::Ok,
            Err(e) => fail(study_status(&e), e.to_string()),
        }
    })
}
