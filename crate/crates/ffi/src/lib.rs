//! C ABI over `idgal`.
//!
//! Every fallible call returns an [`IdgalStatus`]; results come back through
//! out-pointers. Strings returned to the caller are freed with
//! [`idgal_string_free`], series handles with [`idgal_series_free`].
//! The message of the last error on the calling thread is available from
//! [`idgal_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use idgal::ide::IdeJson;
use idgal::pipelines::{parse_suite, run_suite};
use idgal::series::{parse_series, LaurentSeries};
use idgal::{Error, Prime};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdgalStatus {
    Ok = 0,
    /// The check ran and did not pass.
    Failed = 1,
    NullPointer = 2,
    InvalidUtf8 = 3,
    NotPrime = 4,
    Parse = 5,
    Precision = 6,
    Config = 7,
    Math = 8,
    Panic = 9,
}

/// Truncated Laurent series over `F_p`.
pub struct IdgalSeries(LaurentSeries);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IdgalStatus {
    match e {
        Error::NotPrime(_) => IdgalStatus::NotPrime,
        Error::Parse(_) => IdgalStatus::Parse,
        Error::Precision(_) | Error::DepthExceeded { .. } | Error::Incomparable { .. } => IdgalStatus::Precision,
        Error::Config(_) | Error::LengthMismatch(..) | Error::Dimension(_) | Error::BadDigit { .. } => {
            IdgalStatus::Config
        }
        _ => IdgalStatus::Math,
    }
}

fn guard<F: FnOnce() -> Result<IdgalStatus, (IdgalStatus, String)>>(f: F) -> IdgalStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            IdgalStatus::Panic
        }
    }
}

fn lib<T>(r: idgal::Result<T>) -> Result<T, (IdgalStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (IdgalStatus, String)> {
    if s.is_null() {
        return Err((IdgalStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (IdgalStatus::InvalidUtf8, "string is not UTF-8".into()))
}

fn nonnull<T>(p: *const T) -> Result<(), (IdgalStatus, String)> {
    if p.is_null() {
        Err((IdgalStatus::NullPointer, "null pointer".into()))
    } else {
        Ok(())
    }
}

fn out_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s).expect("no interior nul");
    unsafe { *out = c.into_raw() };
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn idgal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn idgal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `binom(a, n) mod p` for any integer `a`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_lucas_binom(p: u64, a: i64, n: u64, out: *mut u32) -> IdgalStatus {
    guard(|| {
        nonnull(out)?;
        let p = lib(Prime::new(p))?;
        *out = idgal::lucas_binom(p, a, n);
        Ok(IdgalStatus::Ok)
    })
}

/// Parse a literal such as `1*t^-2 + 1*t^3`.
///
/// # Safety
/// `literal` must be a nul-terminated string, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_series_parse(p: u64, literal: *const c_char, out: *mut *mut IdgalSeries) -> IdgalStatus {
    guard(|| {
        nonnull(out)?;
        let p = lib(Prime::new(p))?;
        let s = lib(parse_series(p, text(literal)?))?;
        *out = Box::into_raw(Box::new(IdgalSeries(s)));
        Ok(IdgalStatus::Ok)
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn idgal_series_free(s: *mut IdgalSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `theta^(n)(s)` as a new handle.
///
/// # Safety
/// `s` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_series_theta(s: *const IdgalSeries, n: u64, out: *mut *mut IdgalSeries) -> IdgalStatus {
    guard(|| {
        nonnull(s)?;
        nonnull(out)?;
        *out = Box::into_raw(Box::new(IdgalSeries((*s).0.theta_n(n))));
        Ok(IdgalStatus::Ok)
    })
}

/// Product of two series as a new handle.
///
/// # Safety
/// `a`, `b` must be live handles, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_series_mul(
    a: *const IdgalSeries,
    b: *const IdgalSeries,
    out: *mut *mut IdgalSeries,
) -> IdgalStatus {
    guard(|| {
        nonnull(a)?;
        nonnull(b)?;
        nonnull(out)?;
        if (*a).0.prime() != (*b).0.prime() {
            return Err((IdgalStatus::Config, "series over different primes".into()));
        }
        *out = Box::into_raw(Box::new(IdgalSeries((*a).0.mul(&(*b).0))));
        Ok(IdgalStatus::Ok)
    })
}

/// Coefficient of `t^e`; `Precision` at or beyond the truncation.
///
/// # Safety
/// `s` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_series_coeff(s: *const IdgalSeries, e: i64, out: *mut u32) -> IdgalStatus {
    guard(|| {
        nonnull(s)?;
        nonnull(out)?;
        if e >= (*s).0.prec() {
            return Err((IdgalStatus::Precision, format!("t^{e} is beyond the precision {}", (*s).0.prec())));
        }
        *out = (*s).0.coeff(e);
        Ok(IdgalStatus::Ok)
    })
}

/// Series literal, freed with [`idgal_string_free`].
///
/// # Safety
/// `s` must be a live handle, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_series_to_string(s: *const IdgalSeries, out: *mut *mut c_char) -> IdgalStatus {
    guard(|| {
        nonnull(s)?;
        nonnull(out)?;
        out_string((*s).0.to_string(), out);
        Ok(IdgalStatus::Ok)
    })
}

/// Validate an IDE file's contents to `order`; `report_json` receives the
/// report. Returns `Failed` when the equation is not compatible.
///
/// # Safety
/// `ide_json` must be a nul-terminated string, `report_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_ide_check_json(
    ide_json: *const c_char,
    order: u64,
    report_json: *mut *mut c_char,
) -> IdgalStatus {
    guard(|| {
        nonnull(report_json)?;
        let ide: IdeJson =
            serde_json::from_str(text(ide_json)?).map_err(|e| (IdgalStatus::Parse, format!("malformed IDE: {e}")))?;
        let report = lib(ide.check(order))?;
        out_string(serde_json::to_string(&report).expect("reports serialize"), report_json);
        Ok(if report.passed() { IdgalStatus::Ok } else { IdgalStatus::Failed })
    })
}

/// Run a suite config; `report_json` receives the suite report.
///
/// # Safety
/// `config_json` must be a nul-terminated string, `report_json` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idgal_run_suite_json(config_json: *const c_char, report_json: *mut *mut c_char) -> IdgalStatus {
    guard(|| {
        nonnull(report_json)?;
        let configs = lib(parse_suite(text(config_json)?))?;
        let report = lib(run_suite(&configs))?;
        out_string(report.to_json(), report_json);
        Ok(if report.passed() { IdgalStatus::Ok } else { IdgalStatus::Failed })
    })
}
