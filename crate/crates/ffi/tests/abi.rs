use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use jsacc::analytic::op_sc;
use jsacc::model::{derive, SystemParams};
use jsacc::quadrature::gauss_laguerre;
use jsacc::specfun::SeriesControl;
use jsacc_ffi::*;

fn new_params(n: u32, rho_db: f64) -> *mut JsaccParams {
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(jsacc_params_new_default(n, 1.0, &mut p), JsaccStatus::Ok);
        assert_eq!(jsacc_params_set_rho_db(p, rho_db), JsaccStatus::Ok);
    }
    p
}

fn last_error() -> String {
    let m = jsacc_last_error_message();
    assert!(!m.is_null());
    unsafe { CStr::from_ptr(m) }.to_string_lossy().into_owned()
}

#[test]
fn analytic_matches_library() {
    let p = new_params(8, 10.0);
    let mut v = f64::NAN;
    unsafe {
        assert_eq!(jsacc_analytic(p, JsaccMetric::OpSc, &mut v, ptr::null_mut()), JsaccStatus::Ok);
        jsacc_params_free(p);
    }
    let params = SystemParams::table1(8, 1.0).with_rho_db(10.0);
    let c = derive(&params).unwrap();
    let gl = gauss_laguerre(100).unwrap();
    let direct = op_sc(&c, params.rho(), c.target_rate, &gl, &SeriesControl::default()).unwrap().value;
    assert_eq!(v, direct);
}

#[test]
fn asymptote_is_nan_when_absent() {
    let p = new_params(16, 0.0);
    let (mut v, mut a) = (f64::NAN, 0.0);
    unsafe {
        assert_eq!(jsacc_analytic(p, JsaccMetric::Amdep, &mut v, &mut a), JsaccStatus::Ok);
        jsacc_params_free(p);
    }
    assert!(v > 0.0 && v < 1.0);
    assert!(a.is_nan());
}

#[test]
fn metric_without_closed_form_reports_unavailable() {
    let p = new_params(8, 0.0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(jsacc_analytic(p, JsaccMetric::ErScClamped, &mut v, ptr::null_mut()), JsaccStatus::Unavailable);
        jsacc_params_free(p);
    }
    assert!(last_error().contains("er_sc_clamped"));
}

#[test]
fn estimate_is_deterministic() {
    let p = new_params(8, 60.0);
    let mut a = JsaccEstimate { mean: 0.0, std_error: 0.0, n_trials: 0 };
    let mut b = a;
    unsafe {
        assert_eq!(jsacc_estimate(p, JsaccMetric::ErJsacc, 20_000, 9, &mut a), JsaccStatus::Ok);
        assert_eq!(jsacc_estimate(p, JsaccMetric::ErJsacc, 20_000, 9, &mut b), JsaccStatus::Ok);
        jsacc_params_free(p);
    }
    assert_eq!(a, b);
    assert_eq!(a.n_trials, 20_000);
    assert!(a.std_error > 0.0);
}

#[test]
fn too_few_trials_is_usage_error() {
    let p = new_params(8, 10.0);
    let mut e = JsaccEstimate { mean: 0.0, std_error: 0.0, n_trials: 0 };
    let s = unsafe { jsacc_estimate(p, JsaccMetric::OpSc, 10, 1, &mut e) };
    unsafe { jsacc_params_free(p) };
    assert_ne!(s, JsaccStatus::Ok);
    assert!(!last_error().is_empty());
}

#[test]
fn null_pointers_are_rejected() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(jsacc_analytic(ptr::null(), JsaccMetric::OpSc, &mut v, ptr::null_mut()), JsaccStatus::NullPointer);
        assert_eq!(jsacc_params_new_default(8, 1.0, ptr::null_mut()), JsaccStatus::NullPointer);
        assert_eq!(jsacc_params_set_rho_db(ptr::null_mut(), 1.0), JsaccStatus::NullPointer);
        jsacc_params_free(ptr::null_mut());
    }
    assert!(last_error().contains("null"));
}

#[test]
fn failed_setter_leaves_handle_unchanged() {
    let p = new_params(8, 20.0);
    let (mut before, mut after) = (0.0, 0.0);
    unsafe {
        jsacc_params_rho_db(p, &mut before);
        assert_eq!(jsacc_params_set_xi(p, 1.5), JsaccStatus::InvalidParameter);
        assert_eq!(jsacc_params_set_powers(p, -1.0, 1.0), JsaccStatus::InvalidParameter);
        jsacc_params_rho_db(p, &mut after);
        jsacc_params_free(p);
    }
    assert!((before - 20.0).abs() < 1e-12);
    assert_eq!(before, after);
}

#[test]
fn config_round_trip_and_errors() {
    let text = CString::new(SystemParams::table1(4, 2.0).to_config_string()).unwrap();
    let mut p = ptr::null_mut();
    let mut q = ptr::null_mut();
    let mut rho = 0.0;
    unsafe {
        assert_eq!(jsacc_params_from_config(text.as_ptr(), &mut p), JsaccStatus::Ok);
        assert_eq!(jsacc_params_clone(p, &mut q), JsaccStatus::Ok);
        jsacc_params_free(p);
        assert_eq!(jsacc_params_rho_db(q, &mut rho), JsaccStatus::Ok);
        jsacc_params_free(q);
    }
    assert!((rho - 10.0 * (2.0f64 / SystemParams::table1(4, 2.0).noise_b).log10()).abs() < 1e-12);

    let bad = CString::new("num_elements_n = 4\nnot a line\n").unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { jsacc_params_from_config(bad.as_ptr(), &mut r) }, JsaccStatus::Config);
    assert!(r.is_null());
    assert!(last_error().contains("line 2"));
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(jsacc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("jsacc_ffi_hdr_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("check.c");
    std::fs::write(
        &src,
        "#include <stdio.h>\n#include \"jsacc.h\"\n\
         int main(void) { JsaccEstimate e; JsaccParams *p = 0; (void)e; \
         return jsacc_params_set_rho_db(p, 0.0) == JSACC_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    let out = match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&header)
        .arg(&src)
        .output()
    {
        Ok(o) => o,
        Err(_) => {
            eprintln!("no C compiler on PATH; skipping");
            return;
        }
    };
    let _ = std::fs::remove_dir_all(&dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
