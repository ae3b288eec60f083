//! C ABI for `hypercert`.
//!
//! Series and identity reports cross the boundary as opaque handles that the
//! caller releases with the matching `*_free` function. Rationals travel as
//! NUL-terminated `"p/q"` strings allocated here and released with
//! [`hc_string_free`]. Every fallible call returns an [`HcStatus`]; the text
//! of the most recent failure on the calling thread is available from
//! [`hc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hypercert::cli::{parse_integer_list, parse_rational, parse_rational_list, sweep_document, OutputFormat};
use hypercert::exact_arith::format_rational;
use hypercert::hyper_series::{self, Classification, HypSeries, SeriesError};
use hypercert::sesma_identity::{self, IdentityReport, VerifyError};
use hypercert::term_recognize::{self, IntPolynomial, RecognizeError, TermRatio};
use hypercert::whipple::{self, WhippleError};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotTerminating = 4,
    Pole = 5,
    Divergent = 6,
    NotConverged = 7,
    NotRepresentable = 8,
    NoMatch = 9,
    Domain = 10,
    Precondition = 11,
    Pathway = 12,
    NotFactorable = 13,
    InvalidArgument = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcClassification {
    Terminating = 0,
    NonterminatingConvergent = 1,
    NonterminatingDivergent = 2,
    IllPosed = 3,
}

/// Which exact value of a report to read.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcReportField {
    Direct = 0,
    ViaSeries = 1,
    ViaWhipple = 2,
}

/// Opaque pFq series.
pub struct HcSeries(HypSeries);

/// Opaque identity report.
pub struct HcReport(IdentityReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: HcStatus, message: impl ToString) -> HcStatus {
    let text = CString::new(message.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
    status
}

fn series_status(e: &SeriesError) -> HcStatus {
    match e {
        SeriesError::NotTerminating(_) => HcStatus::NotTerminating,
        SeriesError::PoleEncountered(_) => HcStatus::Pole,
        SeriesError::Divergent => HcStatus::Divergent,
        SeriesError::NonConvergedWithinBudget(_) => HcStatus::NotConverged,
        SeriesError::NotRepresentable => HcStatus::NotRepresentable,
        SeriesError::AmbiguousCancellation(_) => HcStatus::InvalidArgument,
    }
}

fn whipple_status(e: &WhippleError) -> HcStatus {
    match e {
        WhippleError::NotTerminating => HcStatus::NotTerminating,
        WhippleError::PoleInClosedForm(..) => HcStatus::Pole,
        WhippleError::Domain(_) => HcStatus::Domain,
    }
}

fn recognize_status(e: &RecognizeError) -> HcStatus {
    match e {
        RecognizeError::NotRationallyFactorable(_) => HcStatus::NotFactorable,
        RecognizeError::PoleOnPath(_) => HcStatus::Pole,
        RecognizeError::ZeroPolynomial | RecognizeError::ZeroDenominator => HcStatus::InvalidArgument,
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, HcStatus> {
    if p.is_null() {
        return Err(fail(HcStatus::NullPointer, "null string argument"));
    }
    // SAFETY: caller guarantees a valid C string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|e| fail(HcStatus::InvalidUtf8, e))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> HcStatus {
    if out.is_null() {
        return fail(HcStatus::NullPointer, "null output pointer");
    }
    let c = CString::new(text).unwrap_or_default();
    // SAFETY: checked non-null above; caller guarantees validity.
    unsafe { *out = c.into_raw() };
    HcStatus::Ok
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write_value<T>(out: *mut T, value: T) -> HcStatus {
    if out.is_null() {
        return fail(HcStatus::NullPointer, "null output pointer");
    }
    // SAFETY: checked non-null above; caller guarantees validity.
    unsafe { *out = value };
    HcStatus::Ok
}

/// # Safety
/// `s` is null or a handle from [`hc_series_new`] or [`hc_recognize`].
unsafe fn series_ref<'a>(s: *const HcSeries) -> Result<&'a HypSeries, HcStatus> {
    // SAFETY: caller guarantees the handle is live.
    unsafe { s.as_ref() }
        .map(|h| &h.0)
        .ok_or_else(|| fail(HcStatus::NullPointer, "null series handle"))
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw in write_string.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Builds a series from comma-separated rational lists (`"-3,5/2"`, `""` for none).
///
/// # Safety
/// String arguments are valid C strings; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_series_new(
    upper: *const c_char,
    lower: *const c_char,
    z: *const c_char,
    out: *mut *mut HcSeries,
) -> HcStatus {
    let upper = try_status!(unsafe { read_str(upper) });
    let lower = try_status!(unsafe { read_str(lower) });
    let z = try_status!(unsafe { read_str(z) });
    let parsed = parse_rational_list(upper).and_then(|u| {
        let l = parse_rational_list(lower)?;
        Ok(HypSeries::new(u, l, parse_rational(z.trim())?))
    });
    let series = match parsed {
        Ok(s) => s,
        Err(e) => return fail(HcStatus::Parse, e),
    };
    let handle = Box::into_raw(Box::new(HcSeries(series)));
    unsafe { write_value(out, handle) }
}

/// # Safety
/// `s` is null or a live series handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_series_free(s: *mut HcSeries) {
    if !s.is_null() {
        // SAFETY: allocated by Box::into_raw.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Canonical text form, e.g. `4F3([-1, 2, 5/2, 3]; [3/2, 2, 5]; -1)`.
///
/// # Safety
/// `s` is a live series handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_series_to_string(s: *const HcSeries, out: *mut *mut c_char) -> HcStatus {
    let s = try_status!(unsafe { series_ref(s) });
    unsafe { write_string(out, s.to_string()) }
}

/// Writes the classification kind and its index (termination or pole index;
/// 0 for the nonterminating kinds).
///
/// # Safety
/// `s` is a live series handle; output pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_series_classify(
    s: *const HcSeries,
    kind: *mut HcClassification,
    index: *mut u64,
) -> HcStatus {
    let s = try_status!(unsafe { series_ref(s) });
    let (k, i) = match hyper_series::classify(s) {
        Classification::Terminating(n) => (HcClassification::Terminating, n),
        Classification::NonterminatingConvergent => (HcClassification::NonterminatingConvergent, 0),
        Classification::NonterminatingDivergent => (HcClassification::NonterminatingDivergent, 0),
        Classification::IllPosed(m) => (HcClassification::IllPosed, m),
    };
    let status = unsafe { write_value(kind, k) };
    if status != HcStatus::Ok {
        return status;
    }
    unsafe { write_value(index, i) }
}

/// Exact sum of a terminating series as a `"p/q"` string.
///
/// # Safety
/// `s` is a live series handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_series_eval_exact(s: *const HcSeries, out: *mut *mut c_char) -> HcStatus {
    let s = try_status!(unsafe { series_ref(s) });
    match hyper_series::eval_exact(s) {
        Ok(v) => unsafe { write_string(out, format_rational(&v)) },
        Err(e) => fail(series_status(&e), e),
    }
}

/// Floating-point sum with truncation tolerance `tol`.
///
/// # Safety
/// `s` is a live series handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_series_eval_numeric(s: *const HcSeries, tol: f64, out: *mut f64) -> HcStatus {
    let s = try_status!(unsafe { series_ref(s) });
    if !(tol > 0.0) {
        return fail(HcStatus::InvalidArgument, "tolerance must be positive");
    }
    match hyper_series::eval_numeric(s, tol) {
        Ok(v) => unsafe { write_value(out, v) },
        Err(e) => fail(series_status(&e), e),
    }
}

/// Matches Whipple's shape and writes the exact closed form.
///
/// # Safety
/// `s` is a live series handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_whipple_rhs_exact(s: *const HcSeries, out: *mut *mut c_char) -> HcStatus {
    let s = try_status!(unsafe { series_ref(s) });
    let Some(w) = whipple::match_whipple(s) else {
        return fail(HcStatus::NoMatch, "series does not have Whipple shape");
    };
    match whipple::rhs_exact_terminating(&w) {
        Ok(v) => unsafe { write_string(out, format_rational(&v)) },
        Err(e) => fail(whipple_status(&e), e),
    }
}

/// Matches Whipple's shape and writes the log-Gamma closed form.
///
/// # Safety
/// `s` is a live series handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_whipple_rhs_numeric(s: *const HcSeries, out: *mut f64) -> HcStatus {
    let s = try_status!(unsafe { series_ref(s) });
    let Some(w) = whipple::match_whipple(s) else {
        return fail(HcStatus::NoMatch, "series does not have Whipple shape");
    };
    match whipple::rhs_numeric(&w) {
        Ok(v) => unsafe { write_value(out, v) },
        Err(e) => fail(whipple_status(&e), e),
    }
}

/// `ln Γ(x)` for `x > 0`.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_log_gamma(x: f64, out: *mut f64) -> HcStatus {
    match whipple::log_gamma(x) {
        Ok(v) => unsafe { write_value(out, v) },
        Err(e) => fail(whipple_status(&e), e),
    }
}

/// Recognizes the term with ratio `num(n)/den(n)` (ascending integer
/// coefficient lists) and initial term `t0`. Writes the prefactor string and
/// a new series handle.
///
/// # Safety
/// String arguments are valid C strings; output pointers are valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_recognize(
    num: *const c_char,
    den: *const c_char,
    t0: *const c_char,
    prefactor: *mut *mut c_char,
    series: *mut *mut HcSeries,
) -> HcStatus {
    let num = try_status!(unsafe { read_str(num) });
    let den = try_status!(unsafe { read_str(den) });
    let t0 = try_status!(unsafe { read_str(t0) });
    if prefactor.is_null() || series.is_null() {
        return fail(HcStatus::NullPointer, "null output pointer");
    }
    let parsed = parse_integer_list(num).and_then(|n| {
        Ok(TermRatio {
            num: IntPolynomial::new(n),
            den: IntPolynomial::new(parse_integer_list(den)?),
            t0: parse_rational(t0.trim())?,
        })
    });
    let ratio = match parsed {
        Ok(r) => r,
        Err(e) => return fail(HcStatus::Parse, e),
    };
    match term_recognize::recognize(&ratio) {
        Ok(ps) => {
            let status = unsafe { write_string(prefactor, format_rational(&ps.prefactor)) };
            if status == HcStatus::Ok {
                let handle = Box::into_raw(Box::new(HcSeries(ps.series)));
                unsafe { *series = handle };
            }
            status
        }
        Err(e) => fail(recognize_status(&e), e),
    }
}

/// Certifies the binomial identity at `(k, m)`.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_verify(k: u64, m: u64, out: *mut *mut HcReport) -> HcStatus {
    match sesma_identity::verify(k, m) {
        Ok(r) => {
            let handle = Box::into_raw(Box::new(HcReport(r)));
            let status = unsafe { write_value(out, handle) };
            if status != HcStatus::Ok {
                drop(unsafe { Box::from_raw(handle) });
            }
            status
        }
        Err(e @ VerifyError::Precondition(_)) => fail(HcStatus::Precondition, e),
        Err(e) => fail(HcStatus::Pathway, e),
    }
}

/// # Safety
/// `r` is null or a live report handle; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_report_free(r: *mut HcReport) {
    if !r.is_null() {
        // SAFETY: allocated by Box::into_raw in hc_verify.
        drop(unsafe { Box::from_raw(r) });
    }
}

/// True when all three pathways equal 1. False for a null handle.
///
/// # Safety
/// `r` is null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn hc_report_all_equal_one(r: *const HcReport) -> bool {
    // SAFETY: caller guarantees the handle is live.
    unsafe { r.as_ref() }.is_some_and(|r| r.0.all_equal_one)
}

/// # Safety
/// `r` is a live report handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_report_field(
    r: *const HcReport,
    field: HcReportField,
    out: *mut *mut c_char,
) -> HcStatus {
    // SAFETY: caller guarantees the handle is live.
    let Some(r) = (unsafe { r.as_ref() }) else {
        return fail(HcStatus::NullPointer, "null report handle");
    };
    let value = match field {
        HcReportField::Direct => &r.0.direct,
        HcReportField::ViaSeries => &r.0.via_series,
        HcReportField::ViaWhipple => &r.0.via_whipple,
    };
    unsafe { write_string(out, format_rational(value)) }
}

/// The CLI's `sweep --format json` document for `0 <= m <= k <= k_max`.
/// `jobs = 0` uses all available threads. Returns `Pathway` (with the
/// document still written) when some report fails.
///
/// # Safety
/// `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hc_sweep_json(k_max: u64, jobs: u32, out: *mut *mut c_char) -> HcStatus {
    let jobs = (jobs > 0).then_some(jobs as usize);
    match sweep_document(k_max, jobs) {
        Ok((doc, code)) => {
            let status = unsafe { write_string(out, doc.render(OutputFormat::Json)) };
            if status == HcStatus::Ok && code != 0 {
                return fail(HcStatus::Pathway, "identity violated");
            }
            status
        }
        Err(message) => fail(HcStatus::Precondition, message),
    }
}
