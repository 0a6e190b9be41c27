//! C ABI over the core library: opaque scheme handles, status codes, and
//! JSON reports. The header is generated into `include/cohcfg.h` at build
//! time.
//!
//! Conventions, uniform across the interface:
//!
//! * Functions that return a pointer return NULL on failure and record the
//!   failure; [`cc_last_status`] and [`cc_last_error`] read it back. The
//!   record is thread-local and overwritten by the next call on the same
//!   thread.
//! * Strings returned here are released with [`cc_string_free`], schemes
//!   with [`cc_scheme_free`]. Nothing else may free them.
//! * Handles are opaque; NULL is rejected, never dereferenced.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use cohcfg::closure::one_point_extension;
use cohcfg::construct::{direct_product, direct_sum, wreath};
use cohcfg::error::Error;
use cohcfg::fileio::{parse_scheme, read_scheme, write_scheme};
use cohcfg::schemes::CoherentConfiguration;
use cohcfg::wreathidem::verify_decomposition;

/// A parsed and validated coherent configuration.
pub struct CcScheme(CoherentConfiguration);

/// How the most recent call on this thread ended.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcStatus {
    /// The call succeeded.
    Ok = 0,
    /// The mathematics failed: a certificate does not hold or cannot be
    /// produced. Matches the CLI's exit code 1.
    MathFailure = 1,
    /// The input was unusable: unreadable file, malformed scheme, axiom
    /// violation, out-of-range index. Matches the CLI's exit code 2.
    InvalidInput = 2,
    /// A required pointer argument was NULL.
    NullArgument = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
}

thread_local! {
    static LAST: RefCell<(CcStatus, Option<CString>)> =
        const { RefCell::new((CcStatus::Ok, None)) };
}

fn clear_last() {
    LAST.with(|l| *l.borrow_mut() = (CcStatus::Ok, None));
}

fn set_last(status: CcStatus, message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("NULs removed");
    LAST.with(|l| *l.borrow_mut() = (status, Some(message)));
}

fn classify(e: &Error) -> CcStatus {
    match e {
        Error::AxiomViolation { .. }
        | Error::Parse { .. }
        | Error::ColorOutOfRange { .. }
        | Error::PointOutOfRange { .. }
        | Error::NotHomogeneous(_)
        | Error::NotClosed(_)
        | Error::NotFiberUnion(_)
        | Error::Precondition(_)
        | Error::Io(_) => CcStatus::InvalidInput,
        Error::DimensionMismatch(_)
        | Error::NotInAlgebra(_)
        | Error::SpectralAmbiguity { .. }
        | Error::Internal(_) => CcStatus::MathFailure,
    }
}

fn fail<T>(status: CcStatus, message: String) -> *mut T {
    set_last(status, message);
    ptr::null_mut()
}

fn fail_with<T>(e: Error) -> *mut T {
    fail(classify(&e), e.to_string())
}

/// Borrows the handle behind `p`, recording a failure when it is NULL.
///
/// # Safety
/// `p` must be NULL or a live pointer from this library.
unsafe fn scheme_ref<'a>(p: *const CcScheme, arg: &str) -> Option<&'a CoherentConfiguration> {
    if p.is_null() {
        set_last(CcStatus::NullArgument, format!("{arg} is NULL"));
        return None;
    }
    Some(&(*p).0)
}

/// Reads a NUL-terminated UTF-8 string argument.
///
/// # Safety
/// `p` must be NULL or point to a NUL-terminated byte string.
unsafe fn str_arg<'a>(p: *const c_char, arg: &str) -> Option<&'a str> {
    if p.is_null() {
        set_last(CcStatus::NullArgument, format!("{arg} is NULL"));
        return None;
    }
    match CStr::from_ptr(p).to_str() {
        Ok(s) => Some(s),
        Err(_) => {
            set_last(CcStatus::InvalidUtf8, format!("{arg} is not valid UTF-8"));
            None
        }
    }
}

fn boxed(c: CoherentConfiguration) -> *mut CcScheme {
    Box::into_raw(Box::new(CcScheme(c)))
}

fn json_string<S: serde::Serialize>(value: &S) -> *mut c_char {
    match serde_json::to_string_pretty(value) {
        Ok(s) => CString::new(s).expect("JSON has no NULs").into_raw(),
        Err(e) => fail(CcStatus::MathFailure, format!("serialization: {e}")),
    }
}

/// Status of the most recent call on this thread.
#[no_mangle]
pub extern "C" fn cc_last_status() -> CcStatus {
    LAST.with(|l| l.borrow().0)
}

/// Message for the most recent failure on this thread, or NULL after a
/// success. The pointer is owned by the library and valid until the next
/// call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn cc_last_error() -> *const c_char {
    LAST.with(|l| {
        l.borrow()
            .1
            .as_ref()
            .map_or(ptr::null(), |s| s.as_ptr())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned by one of the
/// string-returning functions here, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates scheme text. NULL on failure.
///
/// # Safety
/// `text` must be NULL or a NUL-terminated byte string.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_parse(text: *const c_char) -> *mut CcScheme {
    clear_last();
    let Some(text) = str_arg(text, "text") else {
        return ptr::null_mut();
    };
    match parse_scheme(text) {
        Ok((_, c)) => boxed(c),
        Err(e) => fail_with(e),
    }
}

/// Reads and validates a scheme file. NULL on failure.
///
/// # Safety
/// `path` must be NULL or a NUL-terminated byte string.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_read_file(path: *const c_char) -> *mut CcScheme {
    clear_last();
    let Some(path) = str_arg(path, "path") else {
        return ptr::null_mut();
    };
    match read_scheme(Path::new(path)) {
        Ok((_, c)) => boxed(c),
        Err(e) => fail_with(e),
    }
}

/// Renders a scheme in the file grammar. Free with [`cc_string_free`].
///
/// # Safety
/// `scheme` must be NULL or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_to_string(scheme: *const CcScheme) -> *mut c_char {
    clear_last();
    let Some(c) = scheme_ref(scheme, "scheme") else {
        return ptr::null_mut();
    };
    CString::new(write_scheme(c)).expect("grammar has no NULs").into_raw()
}

/// Releases a scheme handle.
///
/// # Safety
/// `scheme` must be NULL or a handle returned by this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_free(scheme: *mut CcScheme) {
    if !scheme.is_null() {
        drop(Box::from_raw(scheme));
    }
}

/// Number of points. Zero when `scheme` is NULL.
///
/// # Safety
/// `scheme` must be NULL or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_order(scheme: *const CcScheme) -> usize {
    clear_last();
    scheme_ref(scheme, "scheme").map_or(0, CoherentConfiguration::order)
}

/// Number of colors. Zero when `scheme` is NULL.
///
/// # Safety
/// `scheme` must be NULL or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_rank(scheme: *const CcScheme) -> usize {
    clear_last();
    scheme_ref(scheme, "scheme").map_or(0, CoherentConfiguration::rank)
}

/// Whether the configuration has a single fiber.
///
/// # Safety
/// `scheme` must be NULL or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn cc_scheme_is_homogeneous(scheme: *const CcScheme) -> bool {
    clear_last();
    scheme_ref(scheme, "scheme").is_some_and(CoherentConfiguration::is_homogeneous)
}

unsafe fn binary_construct(
    a: *const CcScheme,
    b: *const CcScheme,
    f: impl FnOnce(&CoherentConfiguration, &CoherentConfiguration) -> Result<CoherentConfiguration, Error>,
) -> *mut CcScheme {
    clear_last();
    let (Some(a), Some(b)) = (scheme_ref(a, "first scheme"), scheme_ref(b, "second scheme"))
    else {
        return ptr::null_mut();
    };
    match f(a, b) {
        Ok(c) => boxed(c),
        Err(e) => fail_with(e),
    }
}

/// Wreath product of two schemes. NULL on failure.
///
/// # Safety
/// `a` and `b` must be NULL or live scheme handles.
#[no_mangle]
pub unsafe extern "C" fn cc_wreath(a: *const CcScheme, b: *const CcScheme) -> *mut CcScheme {
    binary_construct(a, b, |a, b| wreath(a, b).map(|(c, _)| c))
}

/// Direct (tensor) product of two configurations. NULL on failure.
///
/// # Safety
/// `a` and `b` must be NULL or live scheme handles.
#[no_mangle]
pub unsafe extern "C" fn cc_direct_product(
    a: *const CcScheme,
    b: *const CcScheme,
) -> *mut CcScheme {
    binary_construct(a, b, direct_product)
}

/// Direct sum of two configurations. NULL on failure.
///
/// # Safety
/// `a` and `b` must be NULL or live scheme handles.
#[no_mangle]
pub unsafe extern "C" fn cc_direct_sum(a: *const CcScheme, b: *const CcScheme) -> *mut CcScheme {
    binary_construct(a, b, direct_sum)
}

/// One-point extension at `point`. NULL on failure.
///
/// # Safety
/// `scheme` must be NULL or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn cc_one_point_extension(
    scheme: *const CcScheme,
    point: usize,
) -> *mut CcScheme {
    clear_last();
    let Some(c) = scheme_ref(scheme, "scheme") else {
        return ptr::null_mut();
    };
    match one_point_extension(c, point) {
        Ok(ext) => boxed(ext),
        Err(e) => fail_with(e),
    }
}

/// Quasi-thin profile at `y0` as JSON. NULL on failure; free with
/// [`cc_string_free`].
///
/// # Safety
/// `scheme` must be NULL or a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn cc_analyze_json(scheme: *const CcScheme, y0: usize) -> *mut c_char {
    clear_last();
    let Some(c) = scheme_ref(scheme, "scheme") else {
        return ptr::null_mut();
    };
    match c.quasi_thin_profile(y0) {
        Ok(profile) => json_string(&profile),
        Err(e) => fail_with(e),
    }
}

/// Certifies the central primitive idempotent decomposition of the
/// Terwilliger algebra of `x ≀ y` at `(x0, y0)` and returns the full report
/// as JSON. The report's `pass` field carries the verdict; NULL only on a
/// hard failure. Free with [`cc_string_free`].
///
/// # Safety
/// `x` and `y` must be NULL or live scheme handles.
#[no_mangle]
pub unsafe extern "C" fn cc_verify_json(
    x: *const CcScheme,
    y: *const CcScheme,
    x0: usize,
    y0: usize,
    tol: f64,
) -> *mut c_char {
    clear_last();
    let (Some(x), Some(y)) = (scheme_ref(x, "x"), scheme_ref(y, "y")) else {
        return ptr::null_mut();
    };
    match verify_decomposition(x, y, x0, y0, tol) {
        Ok(report) => {
            if !report.pass {
                set_last(CcStatus::MathFailure, "verification failed; see the report".into());
            }
            json_string(&report)
        }
        Err(e) => fail_with(e),
    }
}
