//! Willie's radiometer: detection error probability, its minimum over the
//! threshold, the channel-averaged minimum, and the resulting security rate.
//!
//! With jammer power uniform on `[0, P_J^max]`, Willie's average received power is
//! `ζ₁ P_J + ζ₂` under the silent hypothesis and `ζ₁ P_J + ζ₃` when Alice transmits.

use crate::error::{Error, Result};
use crate::model::DerivedConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepCase {
    /// `τ₂ < τ₃`: the two received-power ranges are disjoint.
    Case1,
    /// `τ₂ > τ₃`: they overlap.
    Case2,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepBreakpoints {
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
    pub tau4: f64,
    pub case_id: DepCase,
}

fn check(op: &'static str, zeta1: f64, zeta2: f64, zeta3: f64, pj_max: f64) -> Result<()> {
    if !(zeta1 > 0.0 && zeta1.is_finite()) {
        return Err(Error::domain(op, format!("zeta1 must be positive, got {zeta1}")));
    }
    if !(zeta2 > 0.0 && zeta2.is_finite()) {
        return Err(Error::domain(op, format!("zeta2 must be positive, got {zeta2}")));
    }
    if !(zeta3 >= zeta2 && zeta3.is_finite()) {
        return Err(Error::domain(op, format!("zeta3 must be at least zeta2, got {zeta3} < {zeta2}")));
    }
    if !(pj_max > 0.0 && pj_max.is_finite()) {
        return Err(Error::domain(op, format!("pj_max must be positive, got {pj_max}")));
    }
    Ok(())
}

pub fn dep_breakpoints(zeta1: f64, zeta2: f64, zeta3: f64, pj_max: f64) -> Result<DepBreakpoints> {
    check("dep_breakpoints", zeta1, zeta2, zeta3, pj_max)?;
    let span = zeta1 * pj_max;
    let (tau2, tau3) = (span + zeta2, zeta3);
    let case_id = if tau2 < tau3 {
        DepCase::Case1
    } else if tau2 > tau3 {
        DepCase::Case2
    } else {
        DepCase::Boundary
    };
    Ok(DepBreakpoints { tau1: zeta2, tau2, tau3, tau4: span + zeta3, case_id })
}

/// False-alarm plus missed-detection probability at threshold `tau`.
pub fn dep_fixed_threshold(tau: f64, zeta1: f64, zeta2: f64, zeta3: f64, pj_max: f64) -> Result<f64> {
    const OP: &str = "dep_fixed_threshold";
    check(OP, zeta1, zeta2, zeta3, pj_max)?;
    if tau.is_nan() {
        return Err(Error::domain(OP, "tau is NaN"));
    }
    let bp = dep_breakpoints(zeta1, zeta2, zeta3, pj_max)?;
    let span = zeta1 * pj_max;
    let false_alarm = |tau: f64| 1.0 - (tau - zeta2) / span;
    let missed = |tau: f64| (tau - zeta3) / span;
    let v = if tau < bp.tau1 {
        1.0
    } else if bp.tau2 <= bp.tau3 {
        if tau < bp.tau2 {
            false_alarm(tau)
        } else if tau < bp.tau3 {
            0.0
        } else if tau < bp.tau4 {
            missed(tau)
        } else {
            1.0
        }
    } else if tau < bp.tau3 {
        false_alarm(tau)
    } else if tau < bp.tau2 {
        1.0 - (zeta3 - zeta2) / span
    } else if tau < bp.tau4 {
        missed(tau)
    } else {
        1.0
    };
    Ok(v.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinDep {
    pub value: f64,
    /// Thresholds attaining the minimum.
    pub interval: (f64, f64),
}

/// Minimum DEP over all thresholds.
pub fn min_dep(zeta1: f64, zeta2: f64, zeta3: f64, pj_max: f64) -> Result<MinDep> {
    let bp = dep_breakpoints(zeta1, zeta2, zeta3, pj_max)?;
    Ok(if bp.tau2 <= bp.tau3 {
        MinDep { value: 0.0, interval: (bp.tau2, bp.tau3) }
    } else {
        let value = (1.0 - (zeta3 - zeta2) / (zeta1 * pj_max)).clamp(0.0, 1.0);
        MinDep { value, interval: (bp.tau3, bp.tau2) }
    })
}

/// Minimum DEP averaged over exponential `|g_JRW|²` and `|g_ARW|²`:
/// `1 − (η₂/η₁) ln(1 + η₁/η₂)`.
pub fn amdep_cc(eta1: f64, eta2: f64) -> Result<f64> {
    if !(eta1 > 0.0 && eta1.is_finite()) || !(eta2 > 0.0 && eta2.is_finite()) {
        return Err(Error::domain("amdep_cc", format!("eta1 and eta2 must be positive, got {eta1}, {eta2}")));
    }
    let r = eta1 / eta2;
    if r < 1e-4 {
        return Ok(r / 2.0 - r * r / 3.0 + r * r * r / 4.0);
    }
    Ok(1.0 - r.ln_1p() / r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecurityRateForm {
    /// `(1 − ℙ) + ℙ ς*_c`.
    #[default]
    Linear,
    /// `1 − ℙ + ℙ² ς*_c`, the composition that first scales the AMDEP by ℙ.
    Squared,
}

/// Probability that Willie cannot recover the message, given the probability
/// `switch_prob` of operating in covert mode.
pub fn security_rate(consts: &DerivedConstants, switch_prob: f64) -> Result<f64> {
    security_rate_with(consts, switch_prob, SecurityRateForm::Linear)
}

pub fn security_rate_with(consts: &DerivedConstants, switch_prob: f64, form: SecurityRateForm) -> Result<f64> {
    if !(0.0..=1.0).contains(&switch_prob) {
        return Err(Error::domain("security_rate", format!("probability must lie in [0, 1], got {switch_prob}")));
    }
    let amdep = amdep_cc(consts.eta1, consts.eta2)?;
    let p = switch_prob;
    Ok(match form {
        SecurityRateForm::Linear => (1.0 - p) + p * amdep,
        SecurityRateForm::Squared => (1.0 - p) + p * p * amdep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive, SystemParams};

    #[test]
    fn below_noise_floor_is_blind() {
        assert_eq!(dep_fixed_threshold(0.5, 1.0, 1.0, 2.0, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn overlapping_case_plateau() {
        let bp = dep_breakpoints(1.0, 1.0, 2.0, 4.0).unwrap();
        assert_eq!(bp.case_id, DepCase::Case2);
        assert_eq!(dep_fixed_threshold(1.5, 1.0, 1.0, 2.0, 4.0).unwrap(), 0.875);
        assert_eq!(dep_fixed_threshold(3.0, 1.0, 1.0, 2.0, 4.0).unwrap(), 0.75);
        assert_eq!(min_dep(1.0, 1.0, 2.0, 4.0).unwrap(), MinDep { value: 0.75, interval: (2.0, 5.0) });
    }

    #[test]
    fn silent_alice_is_undetectable() {
        assert_eq!(min_dep(1.0, 1.0, 1.0, 4.0).unwrap().value, 1.0);
    }

    #[test]
    fn separated_powers_are_detectable() {
        let m = min_dep(1.0, 1.0, 10.0, 4.0).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.interval, (5.0, 10.0));
        assert_eq!(dep_breakpoints(1.0, 1.0, 10.0, 4.0).unwrap().case_id, DepCase::Case1);
        // boundary: ζ₃ − ζ₂ = ζ₁ P_J^max
        assert_eq!(min_dep(1.0, 1.0, 5.0, 4.0).unwrap().value, 0.0);
        assert_eq!(dep_breakpoints(1.0, 1.0, 5.0, 4.0).unwrap().case_id, DepCase::Boundary);
    }

    #[test]
    fn dep_domain_errors() {
        assert!(dep_fixed_threshold(1.0, 0.0, 1.0, 2.0, 1.0).is_err());
        assert!(dep_fixed_threshold(1.0, 1.0, 2.0, 1.0, 1.0).is_err());
        assert!(min_dep(1.0, 1.0, 2.0, -1.0).is_err());
        assert!(amdep_cc(0.0, 1.0).is_err());
    }

    #[test]
    fn amdep_values() {
        assert!((amdep_cc(1.0, 1.0).unwrap() - (1.0 - 2f64.ln())).abs() < 1e-15);
        assert!(amdep_cc(1e-9, 1.0).unwrap() < 1e-9);
        let a = amdep_cc(0.99e-4, 1.0).unwrap();
        let b = amdep_cc(1.01e-4, 1.0).unwrap();
        assert!((a - b).abs() < 2e-6);
    }

    #[test]
    fn security_rate_endpoints() {
        let c = derive(&SystemParams::table1(8, 1.0)).unwrap();
        let amdep = amdep_cc(c.eta1, c.eta2).unwrap();
        assert_eq!(security_rate(&c, 0.0).unwrap(), 1.0);
        assert!((security_rate(&c, 1.0).unwrap() - amdep).abs() < 1e-15);
        assert!(security_rate(&c, 1.5).is_err());
        let lin = security_rate_with(&c, 0.4, SecurityRateForm::Linear).unwrap();
        let sq = security_rate_with(&c, 0.4, SecurityRateForm::Squared).unwrap();
        assert!((lin - (0.6 + 0.4 * amdep)).abs() < 1e-15);
        assert!((sq - (0.6 + 0.16 * amdep)).abs() < 1e-15);
    }
}
