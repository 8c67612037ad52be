//! C ABI over `qutrit-bloch`.
//!
//! States live behind the opaque `QbState` handle. Every fallible function
//! returns a `QbStatus`; on anything other than `QB_STATUS_OK` a message is
//! available from `qb_last_error()` on the same thread. Handles produced by
//! the library must be released with `qb_state_free`.
//!
//! Matrices cross the boundary as 18 doubles: row-major `[re, im]` pairs.
//! Pair-indexed arrays use the order 12, 13, 23.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qutrit_bloch::bloch::{bloch_triple, decompose, purity, reconstruct, QutritCoefficients};
use qutrit_bloch::dynamics::evolve;
use qutrit_bloch::linalg::ComplexMatrix;
use qutrit_bloch::num_complex::Complex64;
use qutrit_bloch::tolerance;
use qutrit_bloch::validity::{check_constraints, sample_valid};
use qutrit_bloch::{Error, Generator};

/// Opaque qutrit state.
pub struct QbState {
    coefficients: QutritCoefficients,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotHermitian = 3,
    BadTrace = 4,
    InvalidState = 5,
    Domain = 6,
    Panic = 7,
}

/// Number of residuals written by `qb_state_check`.
pub const QB_CHECK_ENTRIES: usize = 13;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> QbStatus {
    match e {
        Error::NotHermitian { .. } => QbStatus::NotHermitian,
        Error::BadTrace { .. } => QbStatus::BadTrace,
        Error::InvalidState(_) | Error::NotPure { .. } => QbStatus::InvalidState,
        Error::Domain(_) | Error::Precondition(_) => QbStatus::Domain,
        _ => QbStatus::InvalidArgument,
    }
}

fn fail(status: QbStatus, msg: impl Into<String>) -> QbStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into `QB_STATUS_PANIC` and errors into statuses.
fn guard(f: impl FnOnce() -> Result<(), QbStatus>) -> QbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QbStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(QbStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lib_err(e: Error) -> QbStatus {
    fail(status_of(&e), e.to_string())
}

fn null(what: &str) -> QbStatus {
    fail(QbStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to `N` readable doubles.
unsafe fn read_array<const N: usize>(p: *const f64, what: &str) -> Result<[f64; N], QbStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    let mut out = [0.0; N];
    out.copy_from_slice(std::slice::from_raw_parts(p, N));
    Ok(out)
}

/// # Safety
/// `p` must be null or point to `N` writable doubles.
unsafe fn write_array(p: *mut f64, values: &[f64], what: &str) -> Result<(), QbStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    std::slice::from_raw_parts_mut(p, values.len()).copy_from_slice(values);
    Ok(())
}

/// # Safety
/// `s` must be null or a handle from this library.
unsafe fn state_ref<'a>(s: *const QbState) -> Result<&'a QbState, QbStatus> {
    s.as_ref().ok_or_else(|| null("state"))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn emit(out: *mut *mut QbState, c: QutritCoefficients) -> Result<(), QbStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(QbState { coefficients: c }));
    Ok(())
}

/// Creates a state from `ω`, `α`, `β` (three doubles each). The coefficients
/// must be finite with `Σω = 1`; positivity is not required (see
/// `qb_state_is_valid`).
///
/// # Safety
/// Array arguments must point to three doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qb_state_from_coefficients(
    omega: *const f64,
    alpha: *const f64,
    beta: *const f64,
    out: *mut *mut QbState,
) -> QbStatus {
    guard(|| {
        let c = QutritCoefficients::new(
            read_array(omega, "omega")?,
            read_array(alpha, "alpha")?,
            read_array(beta, "beta")?,
        );
        if !c.is_finite() {
            return Err(fail(QbStatus::InvalidArgument, "coefficients must be finite"));
        }
        c.ensure_normalized(tolerance::TRACE).map_err(lib_err)?;
        emit(out, c)
    })
}

/// Creates a state from a Hermitian, trace-1 matrix given as 18 doubles.
///
/// # Safety
/// `rho` must point to 18 doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qb_state_from_rho(rho: *const f64, out: *mut *mut QbState) -> QbStatus {
    guard(|| {
        let raw: [f64; 18] = read_array(rho, "rho")?;
        let data = raw.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let m = ComplexMatrix::new(3, data).map_err(lib_err)?;
        emit(out, decompose(&m).map_err(lib_err)?)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qb_state_free(s: *mut QbState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle; each output must point to three doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_state_coefficients(
    s: *const QbState,
    omega: *mut f64,
    alpha: *mut f64,
    beta: *mut f64,
) -> QbStatus {
    guard(|| {
        let c = state_ref(s)?.coefficients;
        write_array(omega, &c.omega, "omega")?;
        write_array(alpha, &c.alpha, "alpha")?;
        write_array(beta, &c.beta, "beta")
    })
}

/// Writes the density matrix as 18 doubles.
///
/// # Safety
/// `s` must be a live handle; `out` must point to 18 doubles.
#[no_mangle]
pub unsafe extern "C" fn qb_state_rho(s: *const QbState, out: *mut f64) -> QbStatus {
    guard(|| {
        let m = reconstruct(&state_ref(s)?.coefficients);
        let flat: Vec<f64> = m.as_slice().iter().flat_map(|z| [z.re, z.im]).collect();
        write_array(out, &flat, "out")
    })
}

/// Bloch vectors `u_ij = (α, β, γ)` (9 doubles, pair-major) and radii (3).
///
/// # Safety
/// `s` must be a live handle; `u` must point to 9 doubles, `radii` to 3.
#[no_mangle]
pub unsafe extern "C" fn qb_state_bloch(s: *const QbState, u: *mut f64, radii: *mut f64) -> QbStatus {
    guard(|| {
        let t = bloch_triple(&state_ref(s)?.coefficients).map_err(lib_err)?;
        let flat: Vec<f64> = t.u.iter().flatten().copied().collect();
        write_array(u, &flat, "u")?;
        write_array(radii, &t.radii, "radii")
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qb_state_purity(s: *const QbState, out: *mut f64) -> QbStatus {
    guard(|| {
        let p = purity(&state_ref(s)?.coefficients);
        write_array(out, &[p], "out")
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qb_state_is_valid(s: *const QbState, tol: f64, out: *mut bool) -> QbStatus {
    guard(|| {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(fail(QbStatus::InvalidArgument, format!("bad tolerance {tol}")));
        }
        let c = state_ref(s)?.coefficients;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = check_constraints(&c, tol).overall;
        Ok(())
    })
}

/// Writes `QB_CHECK_ENTRIES` residuals (each passes when `≥ -tol`) in the
/// order given by `qb_constraint_name`, plus the overall verdict.
///
/// # Safety
/// `s` must be a live handle; `residuals` must point to `QB_CHECK_ENTRIES`
/// doubles; `overall` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qb_state_check(
    s: *const QbState,
    tol: f64,
    residuals: *mut f64,
    overall: *mut bool,
) -> QbStatus {
    guard(|| {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(fail(QbStatus::InvalidArgument, format!("bad tolerance {tol}")));
        }
        let report = check_constraints(&state_ref(s)?.coefficients, tol);
        let values: Vec<f64> = report.entries.iter().map(|e| e.residual).collect();
        debug_assert_eq!(values.len(), QB_CHECK_ENTRIES);
        write_array(residuals, &values, "residuals")?;
        if overall.is_null() {
            return Err(null("overall"));
        }
        *overall = report.overall;
        Ok(())
    })
}

static NAMES: [&CStr; QB_CHECK_ENTRIES] = [
    c"i",
    c"ii",
    c"iii",
    c"iv",
    c"v",
    c"vi",
    c"minor{1}",
    c"minor{2}",
    c"minor{3}",
    c"minor{1,2}",
    c"minor{1,3}",
    c"minor{2,3}",
    c"minor{1,2,3}",
];

/// Static name of check entry `index`, or null when out of range.
#[no_mangle]
pub extern "C" fn qb_constraint_name(index: usize) -> *const c_char {
    NAMES.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// Evolves under `exp(iθG)` with `generator` one of `A12`, `B13`, `C23`, ….
/// The input state must be valid.
///
/// # Safety
/// `s` must be a live handle, `generator` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn qb_state_evolve(
    s: *const QbState,
    generator: *const c_char,
    theta: f64,
    out: *mut *mut QbState,
) -> QbStatus {
    guard(|| {
        let c = state_ref(s)?.coefficients;
        if generator.is_null() {
            return Err(null("generator"));
        }
        let name = CStr::from_ptr(generator)
            .to_str()
            .map_err(|_| fail(QbStatus::InvalidArgument, "generator is not UTF-8"))?;
        let g: Generator = name.parse().map_err(lib_err)?;
        if !theta.is_finite() {
            return Err(fail(QbStatus::InvalidArgument, "theta must be finite"));
        }
        emit(out, evolve(&c, g, theta).map_err(lib_err)?)
    })
}

/// Draws a valid state; the same seed always gives the same state.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qb_sample(seed: u64, out: *mut *mut QbState) -> QbStatus {
    guard(|| emit(out, sample_valid(seed)))
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn qb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, NUL-terminated and static.
#[no_mangle]
pub extern "C" fn qb_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => c"unknown",
    };
    VERSION.as_ptr()
}
