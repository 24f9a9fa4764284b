//! C interface to the particle-type analyses.
//!
//! Theories live behind an opaque [`GptpTheory`] handle. Every analysis
//! writes a JSON report (the same bytes the `gptp` CLI prints) into a
//! string owned by the library, to be released with [`gptp_string_free`].
//! Fallible calls return a [`GptpStatus`]; on failure
//! [`gptp_last_error`] describes what went wrong on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gpt_particles::catalog::{load_builtin, BuiltinParams, Theory};
use gpt_particles::orbits::PureStateOption;
use gpt_particles::report::{self, RunOptions};
use gpt_particles::{theory_file, Error};

/// Status codes; the numeric values match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GptpStatus {
    Ok = 0,
    PropertyFailed = 1,
    InvalidTheory = 2,
    ClosureExceeded = 3,
    BadArgument = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

/// Which symmetric pure states to analyse.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GptpOption {
    /// Extremal points of the symmetric slice.
    ExtremalSymmetric = 1,
    /// Composite vertices fixed by the swap.
    SymmetricExtremal = 2,
}

/// Opaque theory handle.
pub struct GptpTheory {
    inner: Theory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GptpStatus {
    match e.exit_code() {
        1 => GptpStatus::PropertyFailed,
        2 => GptpStatus::InvalidTheory,
        3 => GptpStatus::ClosureExceeded,
        _ => GptpStatus::BadArgument,
    }
}

fn bad(msg: &str) -> GptpStatus {
    set_error(msg.into());
    GptpStatus::BadArgument
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> GptpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GptpStatus::Ok,
        Ok(Err(e)) => {
            set_error(format!("{}: {e}", e.kind()));
            status_of(&e)
        }
        Err(_) => {
            set_error("internal error".into());
            GptpStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::BadParams(format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::BadParams(format!("{what} is not UTF-8")))
}

fn optional(n: u32) -> Option<usize> {
    (n > 0).then_some(n as usize)
}

fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    let c = CString::new(s).map_err(|_| Error::Validation("report contains a NUL byte".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn run_options(seed: u64, tolerance: f64, max_group_size: usize) -> Result<RunOptions, Error> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::BadParams("tolerance must be a positive number".into()));
    }
    let mut opts = RunOptions { seed, tolerance, ..RunOptions::default() };
    if max_group_size > 0 {
        opts.max_group_size = max_group_size;
    }
    Ok(opts)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gptp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gptp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Loads a built-in theory. `d` and `parties` of zero mean the default.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gptp_theory_builtin(
    name: *const c_char,
    d: u32,
    parties: u32,
    out: *mut *mut GptpTheory,
) -> GptpStatus {
    if out.is_null() {
        return bad("out is null");
    }
    guard(|| {
        let name = str_arg(name, "name")?;
        let inner = load_builtin(name, &BuiltinParams { d: optional(d), parties: optional(parties) })?;
        *out = Box::into_raw(Box::new(GptpTheory { inner }));
        Ok(())
    })
}

/// Loads a polytopal theory from its JSON interchange form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gptp_theory_from_json(json: *const c_char, out: *mut *mut GptpTheory) -> GptpStatus {
    if out.is_null() {
        return bad("out is null");
    }
    guard(|| {
        let text = str_arg(json, "json")?;
        let spec = theory_file::load(&theory_file::from_json(text)?)?;
        *out = Box::into_raw(Box::new(GptpTheory { inner: Theory::Polytopal(Box::new(spec)) }));
        Ok(())
    })
}

/// Writes the interchange JSON of a polytopal theory.
///
/// # Safety
/// `theory` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gptp_theory_export_json(theory: *const GptpTheory, out: *mut *mut c_char) -> GptpStatus {
    if theory.is_null() || out.is_null() {
        return bad("null argument");
    }
    guard(|| match &(*theory).inner {
        Theory::Polytopal(t) => write_string(out, theory_file::to_canonical_json(&theory_file::export(t))),
        Theory::Quantum(_) => Err(Error::BadParams("quantum theories have no polytopal export".into())),
    })
}

/// Releases a theory handle. Null is ignored.
///
/// # Safety
/// `theory` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gptp_theory_free(theory: *mut GptpTheory) {
    if !theory.is_null() {
        drop(Box::from_raw(theory));
    }
}

/// Orbit and particle-type report. `max_group_size` of zero means the
/// default bound.
///
/// # Safety
/// `theory` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gptp_orbits_json(
    theory: *const GptpTheory,
    option: GptpOption,
    seed: u64,
    tolerance: f64,
    max_group_size: usize,
    out: *mut *mut c_char,
) -> GptpStatus {
    if theory.is_null() || out.is_null() {
        return bad("null argument");
    }
    guard(|| {
        let opts = run_options(seed, tolerance, max_group_size)?;
        let option = match option {
            GptpOption::ExtremalSymmetric => PureStateOption::ExtremalSymmetric,
            GptpOption::SymmetricExtremal => PureStateOption::SymmetricExtremal,
        };
        write_string(out, report::to_json(&report::orbits_report(&(*theory).inner, option, &opts)?))
    })
}

/// Sector decomposition report for the symmetrisation idempotent.
///
/// # Safety
/// `theory` must come from this library and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gptp_split_json(
    theory: *const GptpTheory,
    seed: u64,
    tolerance: f64,
    out: *mut *mut c_char,
) -> GptpStatus {
    if theory.is_null() || out.is_null() {
        return bad("null argument");
    }
    guard(|| {
        let opts = run_options(seed, tolerance, 0)?;
        write_string(out, report::to_json(&report::split_report(&(*theory).inner, &opts)?))
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gptp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
