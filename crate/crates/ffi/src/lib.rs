//! C interface to `ga-electron`.
//!
//! Every fallible call returns a [`GaeStatus`]; on failure the message is kept
//! per thread and read back with [`gae_last_error`]. Multivectors cross the
//! boundary as 8 doubles in blade order `1, e1, e2, e3, e12, e23, e31, e123`.
//! Handles are opaque and owned by the caller until passed to their `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ga_electron::ofdft::{scf_solve, Problem, ScfResult};
use ga_electron::{Error, Multivector, Rotor};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    GradeMismatch = 4,
    ProblemFile = 5,
    Io = 6,
    NotConverged = 7,
    BufferTooSmall = 8,
    Numerical = 9,
    Panic = 10,
}

/// Parsed solver problem.
pub struct GaeProblem(Problem);

/// Outcome of a self-consistent solve.
pub struct GaeScfResult(ScfResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> GaeStatus {
    match err {
        Error::GradeMismatch { .. } | Error::InvalidGrade(_) => GaeStatus::GradeMismatch,
        Error::Problem(_) | Error::InvalidGrid(_) | Error::GridMismatch { .. } => GaeStatus::ProblemFile,
        Error::Io(_) => GaeStatus::Io,
        Error::NotConverged { .. } => GaeStatus::NotConverged,
        Error::NonFinite(_) | Error::ZeroNorm => GaeStatus::Numerical,
        _ => GaeStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), (GaeStatus, String)>) -> GaeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GaeStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside ga-electron");
            GaeStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (GaeStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (GaeStatus, String) {
    (GaeStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_mv(p: *const f64, what: &str) -> Result<Multivector, (GaeStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    let mut c = [0.0; 8];
    ptr::copy_nonoverlapping(p, c.as_mut_ptr(), 8);
    Ok(Multivector::from_coeffs(c))
}

unsafe fn write_mv(p: *mut f64, m: &Multivector) -> Result<(), (GaeStatus, String)> {
    if p.is_null() {
        return Err(null("output"));
    }
    ptr::copy_nonoverlapping(m.coeffs().as_ptr(), p, 8);
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (GaeStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (GaeStatus::InvalidUtf8, format!("{what}: {e}")))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gae_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gae_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `out = a b`.
///
/// # Safety
/// Each pointer must address 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn gae_mv_product(a: *const f64, b: *const f64, out: *mut f64) -> GaeStatus {
    guard(|| {
        let p = read_mv(a, "a")? * read_mv(b, "b")?;
        write_mv(out, &p)
    })
}

/// `out = a~`.
///
/// # Safety
/// Each pointer must address 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn gae_mv_reverse(a: *const f64, out: *mut f64) -> GaeStatus {
    guard(|| write_mv(out, &read_mv(a, "a")?.reverse()))
}

/// Grade-`k` part of `a`.
///
/// # Safety
/// Each pointer must address 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn gae_mv_grade(a: *const f64, k: u8, out: *mut f64) -> GaeStatus {
    guard(|| {
        let g = read_mv(a, "a")?.grade_project(k).map_err(lib_err)?;
        write_mv(out, &g)
    })
}

/// Rotor `exp(-plane theta / 2)` for a unit bivector `plane`.
///
/// # Safety
/// Each pointer must address 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn gae_rotor_exp(plane: *const f64, theta: f64, out: *mut f64) -> GaeStatus {
    guard(|| {
        let r = Rotor::exp(&read_mv(plane, "plane")?, theta).map_err(lib_err)?;
        write_mv(out, r.as_multivector())
    })
}

/// `out = R v R~` for a unit even `rotor` and a vector `v`.
///
/// # Safety
/// Each pointer must address 8 doubles.
#[no_mangle]
pub unsafe extern "C" fn gae_rotate_vector(rotor: *const f64, v: *const f64, out: *mut f64) -> GaeStatus {
    guard(|| {
        let r = Rotor::from_multivector(read_mv(rotor, "rotor")?).map_err(lib_err)?;
        let w = r.rotate_vector(&read_mv(v, "v")?).map_err(lib_err)?;
        write_mv(out, &w)
    })
}

fn store_problem(out: *mut *mut GaeProblem, p: Problem) -> Result<(), (GaeStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(GaeProblem(p))) };
    Ok(())
}

/// Parses a problem from TOML text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gae_problem_from_toml(text: *const c_char, out: *mut *mut GaeProblem) -> GaeStatus {
    guard(|| {
        let p = Problem::from_toml_str(read_str(text, "text")?).map_err(lib_err)?;
        store_problem(out, p)
    })
}

/// Reads and parses a TOML problem file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gae_problem_load(path: *const c_char, out: *mut *mut GaeProblem) -> GaeStatus {
    guard(|| {
        let p = Problem::load(Path::new(read_str(path, "path")?)).map_err(lib_err)?;
        store_problem(out, p)
    })
}

/// # Safety
/// `p` must come from `gae_problem_*` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gae_problem_free(p: *mut GaeProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Grid points in the problem, or 0 for null.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gae_problem_len(p: *const GaeProblem) -> usize {
    p.as_ref().map_or(0, |p| p.0.grid.len())
}

/// Runs the self-consistent solver. An unconverged run still yields a result;
/// check `gae_result_converged`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gae_problem_solve(p: *const GaeProblem, out: *mut *mut GaeScfResult) -> GaeStatus {
    guard(|| {
        let p = &p.as_ref().ok_or_else(|| null("problem"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let res = scf_solve(&p.grid, &p.v_ext, &p.pi, p.electrons, &p.scf).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(GaeScfResult(res)));
        Ok(())
    })
}

/// # Safety
/// `r` must come from `gae_problem_solve` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gae_result_free(r: *mut GaeScfResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Chemical potential, or NaN for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gae_result_mu(r: *const GaeScfResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.mu)
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gae_result_converged(r: *const GaeScfResult) -> bool {
    r.as_ref().is_some_and(|r| r.0.converged)
}

/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gae_result_iterations(r: *const GaeScfResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.iterations)
}

/// Grid points in the result fields, or 0 for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gae_result_len(r: *const GaeScfResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.fields.len())
}

/// Copies `rho_half` and `S_half` (`len` each) and `e_S` (`3 len`, xyz per point).
///
/// # Safety
/// Buffers must hold the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn gae_result_copy_fields(
    r: *const GaeScfResult,
    rho_half: *mut f64,
    s_half: *mut f64,
    e_s: *mut f64,
    len: usize,
) -> GaeStatus {
    guard(|| {
        let f = &r.as_ref().ok_or_else(|| null("result"))?.0.fields;
        if rho_half.is_null() || s_half.is_null() || e_s.is_null() {
            return Err(null("field buffer"));
        }
        if len < f.len() {
            return Err((GaeStatus::BufferTooSmall, format!("need {} points, got {len}", f.len())));
        }
        ptr::copy_nonoverlapping(f.rho_half.as_ptr(), rho_half, f.len());
        ptr::copy_nonoverlapping(f.s_half.as_ptr(), s_half, f.len());
        ptr::copy_nonoverlapping(f.e_s.as_ptr().cast::<f64>(), e_s, 3 * f.len());
        Ok(())
    })
}

/// Result as JSON; free with `gae_string_free`. Null on failure.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gae_result_to_json(r: *const GaeScfResult) -> *mut c_char {
    let mut out = ptr::null_mut();
    guard(|| {
        let json = r.as_ref().ok_or_else(|| null("result"))?.0.to_json();
        out = CString::new(json).map_err(|e| (GaeStatus::Numerical, e.to_string()))?.into_raw();
        Ok(())
    });
    out
}
