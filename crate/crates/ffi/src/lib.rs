//! C ABI over the `aiecon` library.
//!
//! Every fallible function returns an [`AieStatus`]; results are written through
//! out-pointers. On failure a description is available from
//! [`aiecon_last_error_message`] on the same thread. Panics never cross the
//! boundary: they are reported as [`AieStatus::Panic`].
//!
//! Handles ([`AiePanel`], [`AieReport`]) are opaque and must be released with
//! their matching `_free` function. Strings returned as `char *` are owned by
//! the caller and released with [`aiecon_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use aiecon::composite::{technology_level, ZeroPolicy};
use aiecon::fixtures::FixtureSet;
use aiecon::panel::{
    aggregate, parse_panel_csv, IndicatorPanel, KeyMode, WeightScheme, YearRange, TECH_FACTOR_KEYS,
};
use aiecon::regstats::{self, AuditVerdict};
use aiecon::report::{reproduce, ReproductionReport};
use aiecon::vector::{magnitude, AiFactorVector};
use aiecon::Error;

/// Result codes. `Ok` is zero; everything else is a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AieStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DuplicateKey = 4,
    Schema = 5,
    MissingIndicator = 6,
    DegenerateWeights = 7,
    NegativeFactor = 8,
    ZeroFactor = 9,
    EmptyInput = 10,
    OutOfRange = 11,
    NonPositiveValue = 12,
    DegenerateSeries = 13,
    InvalidArgument = 14,
    Integrity = 15,
    Io = 16,
    Panic = 99,
}

impl From<&Error> for AieStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Header { .. } | Error::Parse { .. } => AieStatus::Parse,
            Error::DuplicateKey { .. } => AieStatus::DuplicateKey,
            Error::Schema { .. } => AieStatus::Schema,
            Error::MissingIndicator { .. } => AieStatus::MissingIndicator,
            Error::DegenerateWeights { .. } => AieStatus::DegenerateWeights,
            Error::NegativeFactor { .. } => AieStatus::NegativeFactor,
            Error::ZeroFactor { .. } => AieStatus::ZeroFactor,
            Error::Factor { source, .. } => AieStatus::from(source.as_ref()),
            Error::EmptyAfterPolicy | Error::EmptyFactors | Error::EmptyReport => {
                AieStatus::EmptyInput
            }
            Error::OutOfRange { .. }
            | Error::NonFiniteFactor { .. }
            | Error::NonFiniteValue { .. } => AieStatus::OutOfRange,
            Error::NonPositiveValue { .. } => AieStatus::NonPositiveValue,
            Error::DegenerateRegressor | Error::DegenerateSeries(_) => AieStatus::DegenerateSeries,
            Error::InvalidWeights(_)
            | Error::InvalidYears(_)
            | Error::InvalidEpsilon(_)
            | Error::LengthMismatch { .. }
            | Error::TooFewPoints(_)
            | Error::InfiniteStatistic
            | Error::InvalidArgument(_) => AieStatus::InvalidArgument,
            Error::Integrity(_) => AieStatus::Integrity,
            Error::Io(_) => AieStatus::Io,
        }
    }
}

/// Zero-factor handling for the geometric mean.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AieZeroPolicy {
    Reject = 0,
    Exclude = 1,
    /// Zeros are replaced by the accompanying `epsilon` argument.
    Epsilon = 2,
}

/// Opaque parsed indicator panel.
pub struct AiePanel {
    inner: IndicatorPanel,
}

/// Opaque reproduction report.
pub struct AieReport {
    inner: ReproductionReport,
}

/// Output of [`aiecon_regress_loglog`]. `t_stat` and `p_value` are NaN when
/// `perfect_fit` is set.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct AieRegression {
    pub slope_b1: f64,
    pub intercept_b0: f64,
    pub pearson_r: f64,
    pub r_squared: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub df: u64,
    pub n: usize,
    pub perfect_fit: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AieAuditVerdict {
    Consistent = 0,
    Inconsistent = 1,
    PerfectFit = 2,
}

/// Output of [`aiecon_audit`]. Implied values are NaN for a perfect fit.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct AieAudit {
    pub implied_abs_t: f64,
    pub implied_p: f64,
    pub p_ratio: f64,
    pub p_relative_diff: f64,
    pub df: u64,
    pub verdict: AieAuditVerdict,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn fail(status: AieStatus, msg: impl Into<String>) -> AieStatus {
    set_last_error(msg);
    status
}

fn fail_with(e: &Error) -> AieStatus {
    fail(AieStatus::from(e), e.to_string())
}

/// Runs `body`, converting panics to [`AieStatus::Panic`].
fn guard(body: impl FnOnce() -> AieStatus) -> AieStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(AieStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, AieStatus> {
    if p.is_null() {
        return Err(fail(AieStatus::NullPointer, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(AieStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], AieStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(AieStatus::NullPointer, format!("`{name}` is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn zero_policy(policy: AieZeroPolicy, epsilon: f64) -> Result<ZeroPolicy, AieStatus> {
    match policy {
        AieZeroPolicy::Reject => Ok(ZeroPolicy::Reject),
        AieZeroPolicy::Exclude => Ok(ZeroPolicy::Exclude),
        AieZeroPolicy::Epsilon => ZeroPolicy::epsilon(epsilon).map_err(|e| fail_with(&e)),
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! try_core {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail_with(&e),
        }
    };
}

/// Message for the last failure on this thread, or null. Valid until the next
/// call into this library on the same thread.
#[no_mangle]
pub extern "C" fn aiecon_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn aiecon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aiecon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a panel CSV (`country,indicator,year,value`).
///
/// # Safety
/// `csv` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_panel_parse(
    csv: *const c_char,
    lenient: bool,
    out: *mut *mut AiePanel,
) -> AieStatus {
    guard(|| {
        if out.is_null() {
            return fail(AieStatus::NullPointer, "`out` is null");
        }
        let text = try_status!(str_arg(csv, "csv"));
        let mode = if lenient {
            KeyMode::Lenient
        } else {
            KeyMode::Strict
        };
        let inner = try_core!(parse_panel_csv(text, mode));
        *out = Box::into_raw(Box::new(AiePanel { inner }));
        AieStatus::Ok
    })
}

/// # Safety
/// `panel` must be null or a handle from [`aiecon_panel_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aiecon_panel_free(panel: *mut AiePanel) {
    if !panel.is_null() {
        drop(Box::from_raw(panel));
    }
}

/// Number of observations, or 0 for a null handle.
///
/// # Safety
/// `panel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aiecon_panel_len(panel: *const AiePanel) -> usize {
    panel.as_ref().map_or(0, |p| p.inner.len())
}

/// Number of distinct countries, or 0 for a null handle.
///
/// # Safety
/// `panel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aiecon_panel_country_count(panel: *const AiePanel) -> usize {
    panel.as_ref().map_or(0, |p| p.inner.countries().len())
}

/// Technology level of `country`: uniform average of the six canonical factors
/// over `[year_start, year_end]`, then their geometric mean.
///
/// # Safety
/// `panel` must be a live handle, `country` a NUL-terminated string and
/// `out_value` writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_technology_level(
    panel: *const AiePanel,
    country: *const c_char,
    year_start: i32,
    year_end: i32,
    policy: AieZeroPolicy,
    epsilon: f64,
    out_value: *mut f64,
) -> AieStatus {
    guard(|| {
        let Some(panel) = panel.as_ref() else {
            return fail(AieStatus::NullPointer, "`panel` is null");
        };
        if out_value.is_null() {
            return fail(AieStatus::NullPointer, "`out_value` is null");
        }
        let country = try_status!(str_arg(country, "country"));
        let policy = try_status!(zero_policy(policy, epsilon));
        let years = try_core!(YearRange::new(year_start, year_end));
        let profile = try_core!(aggregate(
            &panel.inner,
            country,
            years,
            &WeightScheme::Uniform,
            &TECH_FACTOR_KEYS
        ));
        let level = try_core!(technology_level(&profile, policy, KeyMode::Strict));
        *out_value = level.value;
        AieStatus::Ok
    })
}

/// Geometric mean of `len` factors.
///
/// # Safety
/// `factors` must point to `len` readable doubles; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_geometric_mean(
    factors: *const f64,
    len: usize,
    policy: AieZeroPolicy,
    epsilon: f64,
    out_value: *mut f64,
) -> AieStatus {
    guard(|| {
        if out_value.is_null() {
            return fail(AieStatus::NullPointer, "`out_value` is null");
        }
        let factors = try_status!(slice_arg(factors, len, "factors"));
        let policy = try_status!(zero_policy(policy, epsilon));
        *out_value = try_core!(aiecon::composite::geometric_mean(factors, policy));
        AieStatus::Ok
    })
}

/// Euclidean magnitude of a six-component AI factor vector (technological
/// development, adoption, workforce, productivity, market demand, regulatory
/// environment). Rate components must be fractions in `[0, 1]`.
///
/// # Safety
/// `components` must point to 6 readable doubles; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_vector_magnitude(
    components: *const f64,
    out_value: *mut f64,
) -> AieStatus {
    guard(|| {
        if out_value.is_null() {
            return fail(AieStatus::NullPointer, "`out_value` is null");
        }
        let c = try_status!(slice_arg(components, 6, "components"));
        let arr = [c[0], c[1], c[2], c[3], c[4], c[5]];
        let v = try_core!(AiFactorVector::new("", arr));
        *out_value = magnitude(&v).value;
        AieStatus::Ok
    })
}

/// Natural-log transform of both series, then OLS, Pearson r, r² and the
/// two-sided slope t-test.
///
/// # Safety
/// `x` and `y` must each point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_regress_loglog(
    x: *const f64,
    y: *const f64,
    n: usize,
    out: *mut AieRegression,
) -> AieStatus {
    guard(|| {
        if out.is_null() {
            return fail(AieStatus::NullPointer, "`out` is null");
        }
        let x = try_status!(slice_arg(x, n, "x"));
        let y = try_status!(slice_arg(y, n, "y"));
        let r = try_core!(regstats::regress_loglog(x, y, &[]));
        *out = AieRegression {
            slope_b1: r.slope_b1,
            intercept_b0: r.intercept_b0,
            pearson_r: r.pearson_r,
            r_squared: r.r_squared,
            t_stat: r.t_stat.unwrap_or(f64::NAN),
            p_value: r.p_value.unwrap_or(f64::NAN),
            df: r.df,
            n: r.n,
            perfect_fit: r.perfect_fit,
        };
        AieStatus::Ok
    })
}

/// P(T > t) for Student's t with `df` degrees of freedom; NaN when `df` is 0.
#[no_mangle]
pub extern "C" fn aiecon_student_t_sf(t: f64, df: u64) -> f64 {
    if df == 0 {
        return f64::NAN;
    }
    regstats::student_t_sf(t, df)
}

/// 2 · P(T > |t|); NaN when `df` is 0.
#[no_mangle]
pub extern "C" fn aiecon_two_sided_p(t: f64, df: u64) -> f64 {
    if df == 0 {
        return f64::NAN;
    }
    regstats::two_sided_p(t, df)
}

/// Consistency of a reported (n, r², p) triple with the slope t-test.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_audit(
    n: usize,
    r_squared: f64,
    p_value: f64,
    tolerance: f64,
    out: *mut AieAudit,
) -> AieStatus {
    guard(|| {
        if out.is_null() {
            return fail(AieStatus::NullPointer, "`out` is null");
        }
        let a = try_core!(regstats::audit_reported(n, r_squared, p_value, tolerance));
        *out = AieAudit {
            implied_abs_t: a.implied_abs_t.unwrap_or(f64::NAN),
            implied_p: a.implied_p.unwrap_or(f64::NAN),
            p_ratio: a.p_ratio.unwrap_or(f64::NAN),
            p_relative_diff: a.p_relative_diff.unwrap_or(f64::NAN),
            df: a.df,
            verdict: match a.verdict {
                AuditVerdict::Consistent => AieAuditVerdict::Consistent,
                AuditVerdict::Inconsistent => AieAuditVerdict::Inconsistent,
                AuditVerdict::PerfectFit => AieAuditVerdict::PerfectFit,
            },
        };
        AieStatus::Ok
    })
}

/// Reproduces the reference tables from the bundled fixture.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn aiecon_reproduce(out: *mut *mut AieReport) -> AieStatus {
    guard(|| {
        if out.is_null() {
            return fail(AieStatus::NullPointer, "`out` is null");
        }
        let fixture = try_core!(FixtureSet::bundled());
        let inner = try_core!(reproduce(&fixture));
        *out = Box::into_raw(Box::new(AieReport { inner }));
        AieStatus::Ok
    })
}

/// True iff every non-excluded entry passed. False for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aiecon_report_passed(report: *const AieReport) -> bool {
    report.as_ref().is_some_and(|r| r.inner.passed())
}

/// Number of per-cell entries, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn aiecon_report_entry_count(report: *const AieReport) -> usize {
    report.as_ref().map_or(0, |r| r.inner.entries.len())
}

/// The report as JSON; free with [`aiecon_string_free`]. Null on failure.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn aiecon_report_json(report: *const AieReport) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        let Some(report) = report.as_ref() else {
            return fail(AieStatus::NullPointer, "`report` is null");
        };
        let json = try_core!(aiecon::render::json(&report.inner));
        match CString::new(json) {
            Ok(s) => {
                result = s.into_raw();
                AieStatus::Ok
            }
            Err(_) => fail(AieStatus::Io, "report contains NUL"),
        }
    });
    result
}

/// # Safety
/// `report` must be null or a handle from [`aiecon_reproduce`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn aiecon_report_free(report: *mut AieReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
