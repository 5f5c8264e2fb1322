use crate::channel_stats::{ncx2_cdf_terms, SeriesValue};
use crate::error::{Error, Result};
use crate::model::DerivedConstants;
use crate::quadrature::{QuadratureRule, RuleKind};
use crate::specfun::{ln_gamma_unchecked as ln_gamma, SeriesControl};

use super::{OpResult, Regime};

fn check_rho(op: &'static str, rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("rho must be positive and finite, got {rho}")))
    }
}

fn check_rate(op: &'static str, rate: f64) -> Result<()> {
    if rate >= 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("target rate must be nonnegative, got {rate}")))
    }
}

/// CDF of the normalized coherent gain `X = |g_ARB|² / (β² N (1−μ))`.
fn coherent_cdf(consts: &DerivedConstants, x: f64, ctrl: &SeriesControl) -> Result<SeriesValue> {
    ncx2_cdf_terms(x, consts.lambda, ctrl)
}

/// Slope of the SC outage boundary in the exponential gain `t = |g_ARW|²/N`:
/// outage iff `X < ϖ₁/ρ + slope · t`.
fn sc_slope(consts: &DerivedConstants, rate_bps: f64) -> f64 {
    consts.normalized(rate_bps).exp2() * consts.l2 / (consts.l1 * (1.0 - consts.mu))
}

fn gauss_laguerre_op(
    op: &'static str,
    consts: &DerivedConstants,
    offset: f64,
    rate_bps: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<(f64, usize)> {
    gl.expect_kind(RuleKind::GaussLaguerre, op)?;
    let slope = sc_slope(consts, rate_bps);
    let mut sum = 0.0;
    let mut terms = 0;
    for (&t, &w) in gl.nodes().iter().zip(gl.weights()) {
        let f = coherent_cdf(consts, offset + slope * t, ctrl)?;
        sum += w * f.value;
        terms += f.terms;
    }
    Ok((sum.clamp(0.0, 1.0), terms))
}

/// Outage probability of the conventional secrecy system: the secrecy rate
/// falls below `target_rate` (bit/s).
pub fn op_sc(
    consts: &DerivedConstants,
    rho: f64,
    target_rate: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<OpResult> {
    const OP: &str = "op_sc";
    check_rho(OP, rho)?;
    check_rate(OP, target_rate)?;
    let offset = consts.varpi1_for(target_rate) / rho;
    let (value, terms) = gauss_laguerre_op(OP, consts, offset, target_rate, gl, ctrl)?;
    Ok(OpResult { value, regime: Regime::Exact, series_terms_used: terms })
}

/// ρ-independent outage floor of the conventional secrecy system.
pub fn op_sc_high_snr(
    consts: &DerivedConstants,
    target_rate: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<OpResult> {
    const OP: &str = "op_sc_high_snr";
    check_rate(OP, target_rate)?;
    let (value, terms) = gauss_laguerre_op(OP, consts, 0.0, target_rate, gl, ctrl)?;
    Ok(OpResult { value, regime: Regime::HighSnrAsymptote, series_terms_used: terms })
}

struct JsaccSetup {
    /// ϖ₁/ρ
    a: f64,
    /// dX-threshold per unit of `|g_ARW|²`
    b: f64,
    varpi2: f64,
    f_kappa: SeriesValue,
}

fn jsacc_setup(
    op: &'static str,
    consts: &DerivedConstants,
    rho: f64,
    target_rate: f64,
    cg: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<JsaccSetup> {
    check_rho(op, rho)?;
    check_rate(op, target_rate)?;
    cg.expect_kind(RuleKind::ChebyshevGauss, op)?;
    let varpi1 = consts.varpi1_for(target_rate);
    let a = varpi1 / rho;
    let b = sc_slope(consts, target_rate) / consts.n as f64;
    let f_kappa = coherent_cdf(consts, a / consts.kappa, ctrl)?;
    Ok(JsaccSetup { a, b, varpi2: consts.varpi2(rho, target_rate), f_kappa })
}

/// Outage probability of the JSACC system with `⋍ = R̄`.
///
/// Outage happens in covert mode when `X < min(ϖ₁/(κρ), ϖ₁/ρ + b·y)`, with `y = |g_ARW|²`
/// exponential of mean N. Writing the result as `F(ϖ₁/(κρ)) − D`,
/// `D = ∫₀^{ϖ₂} [F(ϖ₁/(κρ)) − F(ϖ₁/ρ + b y)] e^{−y/N}/N dy`
/// is integrated by Chebyshev-Gauss in `u = 1 − e^{−y/N}`. That keeps the node
/// density where the exponential weight lives even when ϖ₂ ≫ N, unlike the
/// affine map of [`op_jsacc_affine`].
pub fn op_jsacc(
    consts: &DerivedConstants,
    rho: f64,
    target_rate: f64,
    cg: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<OpResult> {
    const OP: &str = "op_jsacc";
    let s = jsacc_setup(OP, consts, rho, target_rate, cg, ctrl)?;
    let n = consts.n as f64;
    let u_max = -(-s.varpi2 / n).exp_m1();
    let mut terms = s.f_kappa.terms;
    let mut d = 0.0;
    for (&t, &w) in cg.nodes().iter().zip(cg.weights()) {
        let u = 0.5 * u_max * (t + 1.0);
        let y = -n * (-u).ln_1p();
        let f = coherent_cdf(consts, s.a + s.b * y, ctrl)?;
        terms += f.terms;
        d += w * (1.0 - t * t).sqrt() * (s.f_kappa.value - f.value).max(0.0);
    }
    d *= 0.5 * u_max;
    let value = (s.f_kappa.value - d).clamp(0.0, 1.0);
    Ok(OpResult { value, regime: Regime::Exact, series_terms_used: terms })
}

/// The same outage integral with the `y ∈ [0, ϖ₂]` range mapped affinely onto
/// `[−1, 1]`: `e^{−ϖ₂/N} F(ϖ₁/(κρ)) + Σ ω_i Φ₁(t_i)`.
pub fn op_jsacc_affine(
    consts: &DerivedConstants,
    rho: f64,
    target_rate: f64,
    cg: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<OpResult> {
    const OP: &str = "op_jsacc_affine";
    let s = jsacc_setup(OP, consts, rho, target_rate, cg, ctrl)?;
    let n = consts.n as f64;
    let mut terms = s.f_kappa.terms;
    let mut sum = (-s.varpi2 / n).exp() * s.f_kappa.value;
    let half_span = 0.5 * s.varpi2;
    for (&t, &w) in cg.nodes().iter().zip(cg.weights()) {
        let y = half_span * (t + 1.0);
        let f = coherent_cdf(consts, s.a + s.b * y, ctrl)?;
        terms += f.terms;
        sum += w * (1.0 - t * t).sqrt() * half_span / n * (-y / n).exp() * f.value;
    }
    Ok(OpResult { value: sum.clamp(0.0, 1.0), regime: Regime::Exact, series_terms_used: terms })
}

/// High-SNR power law of the JSACC outage, `m̃^N c̃₁^{2m_sN} (κρ)^{−m_sN} / Γ(2m_sN + 1)`.
/// Requires `m_RB ≠ m_AR`.
pub fn op_jsacc_high_snr(consts: &DerivedConstants, rho: f64, target_rate: f64) -> Result<OpResult> {
    const OP: &str = "op_jsacc_high_snr";
    check_rho(OP, rho)?;
    check_rate(OP, target_rate)?;
    let Some(m_tilde) = consts.m_tilde else {
        return Err(Error::domain(OP, "undefined when m_RB = m_AR"));
    };
    let n = consts.n as f64;
    let order = consts.m_s * n;
    let c1_sq = crate::model::exp2_m1(consts.normalized(target_rate)) / (consts.beta * consts.beta * consts.l1);
    let ln = n * m_tilde.ln() + order * (c1_sq.ln() - consts.kappa.ln() - rho.ln()) - ln_gamma(2.0 * order + 1.0);
    Ok(OpResult { value: ln.exp(), regime: Regime::HighSnrAsymptote, series_terms_used: 0 })
}
