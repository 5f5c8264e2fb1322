//! Closed-form metrics of the JSACC and conventional secrecy systems.
//!
//! All rates are in bit/s/Hz; multiply by the bandwidth for bit/s.

mod dep;
mod ergodic;
mod outage;

pub use dep::{
    amdep_cc, dep_breakpoints, dep_fixed_threshold, min_dep, security_rate, security_rate_with, DepBreakpoints,
    DepCase, MinDep, SecurityRateForm,
};
pub use ergodic::{
    er_jsacc, er_jsacc_high_snr, er_jsacc_with_bounds, er_sc, er_sc_high_snr, mean_inverse_gain,
    switch_probability, ErBounds,
};
pub use outage::{op_jsacc, op_jsacc_affine, op_jsacc_high_snr, op_sc, op_sc_high_snr};

use crate::model::DerivedConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Exact,
    /// May exceed 1 at low SNR.
    HighSnrAsymptote,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpResult {
    pub value: f64,
    pub regime: Regime,
    pub series_terms_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Jsacc,
    Sc,
}

/// Negative high-SNR slope of log OP against log ρ.
pub fn diversity_order(system: SystemKind, consts: &DerivedConstants) -> f64 {
    match system {
        SystemKind::Jsacc => consts.m_s * consts.n as f64,
        SystemKind::Sc => 0.0,
    }
}
