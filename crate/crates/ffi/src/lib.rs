//! C ABI over the `jsacc` library.
//!
//! Every fallible call returns a [`JsaccStatus`]; on failure the message is kept
//! per thread and can be read with [`jsacc_last_error_message`]. Parameter sets
//! are opaque [`JsaccParams`] handles owned by the caller and released with
//! [`jsacc_params_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jsacc::model::SystemParams;
use jsacc::montecarlo::{estimate, MetricId};
use jsacc::sweep::analytic_value;
use jsacc::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsaccStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Convergence = 3,
    InvalidParameter = 4,
    Degenerate = 5,
    Config = 6,
    Usage = 7,
    Io = 8,
    InvalidUtf8 = 9,
    /// The requested metric has no closed form.
    Unavailable = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JsaccMetric {
    OpJsacc = 0,
    OpSc = 1,
    ErJsacc = 2,
    ErSc = 3,
    ErScClamped = 4,
    SwitchProb = 5,
    Amdep = 6,
    SecurityRateFixed = 7,
    SecurityRateAdaptive = 8,
    OutageInclusionViolation = 9,
}

impl From<JsaccMetric> for MetricId {
    fn from(m: JsaccMetric) -> Self {
        match m {
            JsaccMetric::OpJsacc => MetricId::OpJsacc,
            JsaccMetric::OpSc => MetricId::OpSc,
            JsaccMetric::ErJsacc => MetricId::ErJsacc,
            JsaccMetric::ErSc => MetricId::ErSc,
            JsaccMetric::ErScClamped => MetricId::ErScClamped,
            JsaccMetric::SwitchProb => MetricId::SwitchProb,
            JsaccMetric::Amdep => MetricId::Amdep,
            JsaccMetric::SecurityRateFixed => MetricId::SecurityRateFixed,
            JsaccMetric::SecurityRateAdaptive => MetricId::SecurityRateAdaptive,
            JsaccMetric::OutageInclusionViolation => MetricId::OutageInclusionViolation,
        }
    }
}

/// Monte Carlo estimate of one metric.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JsaccEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_trials: u64,
}

/// Opaque parameter set.
pub struct JsaccParams {
    inner: SystemParams,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> JsaccStatus {
    match e {
        Error::Domain { .. } => JsaccStatus::Domain,
        Error::Convergence { .. } => JsaccStatus::Convergence,
        Error::InvalidParameter { .. } => JsaccStatus::InvalidParameter,
        Error::Degenerate(_) => JsaccStatus::Degenerate,
        Error::Config { .. } => JsaccStatus::Config,
        Error::Usage(_) => JsaccStatus::Usage,
        Error::Io(_) => JsaccStatus::Io,
    }
}

fn fail(status: JsaccStatus, msg: impl Into<String>) -> JsaccStatus {
    set_last_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), JsaccStatus>) -> JsaccStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JsaccStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(JsaccStatus::Panic, msg)
        }
    }
}

fn lift<T>(r: jsacc::Result<T>) -> Result<T, JsaccStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), JsaccStatus> {
    if p.is_null() {
        Err(fail(JsaccStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn params_mut<'a>(p: *mut JsaccParams) -> Result<&'a mut JsaccParams, JsaccStatus> {
    non_null(p, "params")?;
    Ok(&mut *p)
}

/// Installs `next` if it validates; otherwise the handle is left as it was.
fn replace(p: &mut JsaccParams, next: SystemParams) -> Result<(), JsaccStatus> {
    lift(next.validate())?;
    p.inner = next;
    Ok(())
}

unsafe fn emit(out: *mut *mut JsaccParams, inner: SystemParams) {
    *out = Box::into_raw(Box::new(JsaccParams { inner }));
}

/// Message of the last failed call on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn jsacc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn jsacc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default parameters with `num_elements` RIS elements and total power `total_power_w` (W).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_new_default(
    num_elements: u32,
    total_power_w: f64,
    out: *mut *mut JsaccParams,
) -> JsaccStatus {
    guard(|| {
        non_null(out, "out")?;
        let p = SystemParams::table1(num_elements as usize, total_power_w);
        lift(p.validate())?;
        emit(out, p);
        Ok(())
    })
}

/// Parses a `key = value` parameter file.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_from_config(text: *const c_char, out: *mut *mut JsaccParams) -> JsaccStatus {
    guard(|| {
        non_null(text, "text")?;
        non_null(out, "out")?;
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| fail(JsaccStatus::InvalidUtf8, e.to_string()))?;
        emit(out, lift(SystemParams::from_config_str(s))?);
        Ok(())
    })
}

/// # Safety
/// `params` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_free(params: *mut JsaccParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// # Safety
/// `params` must be a live handle and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_clone(params: *const JsaccParams, out: *mut *mut JsaccParams) -> JsaccStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(out, "out")?;
        emit(out, (*params).inner.clone());
        Ok(())
    })
}

/// Rescales the total power so that `P_t / σ_B² = 10^{rho_db/10}`.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_set_rho_db(params: *mut JsaccParams, rho_db: f64) -> JsaccStatus {
    guard(|| {
        let p = params_mut(params)?;
        let next = p.inner.with_rho_db(rho_db);
        replace(p, next)
    })
}

/// Sets Alice's power and the jammer's maximum power, both in watts.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_set_powers(params: *mut JsaccParams, p_a_w: f64, p_j_max_w: f64) -> JsaccStatus {
    guard(|| {
        let p = params_mut(params)?;
        let next = lift(p.inner.with_powers(p_a_w, p_j_max_w))?;
        replace(p, next)
    })
}

/// Sets the fraction `xi` of the total power given to Alice.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_set_xi(params: *mut JsaccParams, xi: f64) -> JsaccStatus {
    guard(|| {
        let p = params_mut(params)?;
        let next = lift(p.inner.with_xi(xi))?;
        replace(p, next)
    })
}

/// Sets the secrecy-rate switch threshold in bit/s.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_set_switch_threshold(params: *mut JsaccParams, threshold: f64) -> JsaccStatus {
    guard(|| {
        let p = params_mut(params)?;
        let mut next = p.inner.clone();
        next.switch_threshold = threshold;
        replace(p, next)
    })
}

/// SNR `P_t / σ_B²` in dB.
///
/// # Safety
/// `params` must be a live handle and `out` valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn jsacc_params_rho_db(params: *const JsaccParams, out: *mut f64) -> JsaccStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(out, "out")?;
        *out = 10.0 * (*params).inner.rho().log10();
        Ok(())
    })
}

/// Closed-form value of `metric`. When `asymptote` is non-null it receives the
/// high-SNR counterpart, or NaN if there is none.
///
/// # Safety
/// `params` must be a live handle, `value` valid for one `double`, and
/// `asymptote` null or valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn jsacc_analytic(
    params: *const JsaccParams,
    metric: JsaccMetric,
    value: *mut f64,
    asymptote: *mut f64,
) -> JsaccStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(value, "value")?;
        let id = MetricId::from(metric);
        let v = lift(analytic_value(id, &(*params).inner, !asymptote.is_null()))?;
        if !asymptote.is_null() {
            *asymptote = v.asymptote.unwrap_or(f64::NAN);
        }
        *value = v.exact.ok_or_else(|| fail(JsaccStatus::Unavailable, format!("{id} has no closed form")))?;
        Ok(())
    })
}

/// Monte Carlo estimate of `metric` over `trials` channel draws (at least 1000).
///
/// # Safety
/// `params` must be a live handle and `out` valid for one [`JsaccEstimate`].
#[no_mangle]
pub unsafe extern "C" fn jsacc_estimate(
    params: *const JsaccParams,
    metric: JsaccMetric,
    trials: u64,
    seed: u64,
    out: *mut JsaccEstimate,
) -> JsaccStatus {
    guard(|| {
        non_null(params, "params")?;
        non_null(out, "out")?;
        let e = lift(estimate(metric.into(), &(*params).inner, trials, seed))?;
        *out = JsaccEstimate { mean: e.mean, std_error: e.stderr, n_trials: e.n_trials };
        Ok(())
    })
}
