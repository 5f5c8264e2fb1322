//! Monte Carlo versus closed-form agreement checks behind `jsacc validate`.

use std::fmt;

use crate::analytic::{amdep_cc, er_jsacc, er_sc, op_jsacc, op_sc};
use crate::error::{Error, Result};
use crate::model::{derive, dbm_to_watts, DerivedConstants, SystemParams};
use crate::montecarlo::{estimate_amdep_statistical, run_scenarios, MetricEstimate, MetricId};
use crate::quadrature::{chebyshev_gauss, gauss_laguerre};
use crate::specfun::SeriesControl;
use crate::sweep::QUADRATURE_ORDER;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub trials: u64,
    pub sigma: f64,
    pub seed: u64,
    /// Multiplies ϖ₁ before any closed form is evaluated. Negative-control hook.
    pub corrupt_varpi1: Option<f64>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { trials: 1_000_000, sigma: 3.0, seed: 1, corrupt_varpi1: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn sigma_check(name: String, analytic: f64, est: &MetricEstimate, sigma: f64) -> Check {
    let z = est.z_score(analytic);
    Check {
        name,
        passed: z <= sigma,
        detail: format!(
            "analytic={analytic:.6e} mc={:.6e}±{:.2e} z={z:.2} (limit {sigma})",
            est.mean,
            est.comparison_stderr()
        ),
    }
}

fn relative_check(name: String, analytic: f64, est: &MetricEstimate, tol: f64) -> Check {
    let rel = ((est.mean - analytic) / analytic).abs();
    Check {
        name,
        passed: rel <= tol,
        detail: format!("analytic={analytic:.6e} mc={:.6e}±{:.2e} rel={rel:.2e} (limit {tol})", est.mean, est.stderr),
    }
}

fn constants(p: &SystemParams, opts: &ValidateOptions) -> Result<DerivedConstants> {
    let mut c = derive(p)?;
    if let Some(f) = opts.corrupt_varpi1 {
        c.varpi1 *= f;
    }
    Ok(c)
}

/// Runs the agreement suite with `base` supplying geometry, fading and noise.
pub fn validate(base: &SystemParams, opts: &ValidateOptions) -> Result<ValidationReport> {
    if !(opts.sigma > 0.0) {
        return Err(Error::Usage(format!("tolerance sigma must be positive, got {}", opts.sigma)));
    }
    let gl = gauss_laguerre(QUADRATURE_ORDER)?;
    let cg = chebyshev_gauss(QUADRATURE_ORDER)?;
    let ctrl = SeriesControl::default();
    let mut report = ValidationReport::default();

    // outage at low SNR, N = 8, fixed-rate switching
    let mut p8 = base.clone();
    p8.num_elements_n = 8;
    p8.switch_threshold = p8.target_rate_rbar;
    let dbs = [0.0, 5.0, 10.0, 15.0, 20.0];
    let points: Vec<SystemParams> = dbs.iter().map(|&d| p8.with_rho_db(d)).collect();
    let metrics = [MetricId::OpSc, MetricId::OpJsacc, MetricId::OutageInclusionViolation, MetricId::SwitchProb];
    let est = run_scenarios(&points, &metrics, opts.trials, opts.seed)?;
    for ((db, p), e) in dbs.iter().zip(&points).zip(&est) {
        let c = constants(p, opts)?;
        let sc = op_sc(&c, p.rho(), c.target_rate, &gl, &ctrl)?.value;
        let js = op_jsacc(&c, p.rho(), c.target_rate, &cg, &ctrl)?.value;
        report.checks.push(sigma_check(format!("op_sc rho_db={db}"), sc, &e[0], opts.sigma));
        report.checks.push(sigma_check(format!("op_jsacc rho_db={db}"), js, &e[1], opts.sigma));
        report.checks.push(Check {
            name: format!("op_ordering rho_db={db}"),
            passed: js <= sc + 1e-12 && e[2].mean == 0.0,
            detail: format!("op_jsacc={js:.6e} op_sc={sc:.6e} inclusion_violations={}", e[2].mean * e[2].n_trials as f64),
        });
        let diff = (e[3].mean - e[0].mean).abs();
        report.checks.push(Check {
            name: format!("switch_prob=op_sc rho_db={db}"),
            passed: diff <= opts.sigma * e[0].comparison_stderr() * std::f64::consts::SQRT_2,
            detail: format!("switch_prob={:.6e} op_sc={:.6e}", e[3].mean, e[0].mean),
        });
    }

    // ergodic rates, N = 16
    let mut p16 = base.clone();
    p16.num_elements_n = 16;
    let dbs = [0.0, 10.0, 20.0];
    let points: Vec<SystemParams> = dbs.iter().map(|&d| p16.with_rho_db(d)).collect();
    let est = run_scenarios(&points, &[MetricId::ErSc, MetricId::ErJsacc], opts.trials, opts.seed)?;
    for ((db, p), e) in dbs.iter().zip(&points).zip(&est) {
        let c = constants(p, opts)?;
        let rs = er_sc(&c, p.rho(), &gl, &ctrl)?;
        let rj = er_jsacc(&c, p.rho(), c.switch_threshold, &gl, &ctrl)?;
        report.checks.push(relative_check(format!("er_sc rho_db={db}"), rs, &e[0], 0.02));
        report.checks.push(relative_check(format!("er_jsacc rho_db={db}"), rj, &e[1], 0.02));
    }

    // AMDEP under statistical CSI
    let pairs_dbm = [(0.0, 10.0), (5.0, 10.0), (10.0, 10.0), (10.0, 20.0), (20.0, 10.0)];
    let pairs: Vec<(f64, f64)> = pairs_dbm.iter().map(|&(a, j)| (dbm_to_watts(a), dbm_to_watts(j))).collect();
    let est = estimate_amdep_statistical(&p16, &pairs, opts.trials, opts.seed)?;
    for (((a, j), (pa, pj)), e) in pairs_dbm.iter().zip(&pairs).zip(&est) {
        let c = derive(&p16.with_powers(*pa, *pj)?)?;
        let v = amdep_cc(c.eta1, c.eta2)?;
        report.checks.push(sigma_check(format!("amdep p_a_dbm={a} pj_max_dbm={j}"), v, e, opts.sigma));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_sigma() {
        let opts = ValidateOptions { sigma: 0.0, ..Default::default() };
        assert!(validate(&SystemParams::table1(8, 1.0), &opts).is_err());
    }
}
