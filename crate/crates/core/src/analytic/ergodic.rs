//! Ergodic rates by Gauss-Laguerre quadrature against the coherent
//! (noncentral χ²) and misaligned (exponential) gain laws.

use crate::channel_stats::ncx2_pdf;
use crate::error::Result;
use crate::model::DerivedConstants;
use crate::quadrature::{QuadratureRule, RuleKind};
use crate::specfun::SeriesControl;

use super::op_sc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErBounds {
    pub exact: Option<f64>,
    pub upper: f64,
    pub lower: f64,
}

/// `E[g(X)]` for the normalized coherent gain, `Σ w_i e^{x_i} f(x_i) g(x_i)`.
fn coherent_expect(
    op: &'static str,
    consts: &DerivedConstants,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
    g: impl Fn(f64) -> f64,
) -> Result<f64> {
    gl.expect_kind(RuleKind::GaussLaguerre, op)?;
    let mut sum = 0.0;
    for (x, ln_w) in gl.iter_ln() {
        let pdf = ncx2_pdf(x, consts.lambda, ctrl)?;
        if pdf > 0.0 {
            sum += (ln_w + x).exp() * pdf * g(x);
        }
    }
    Ok(sum)
}

/// `E[g(Y)]` for an exponential gain of mean N.
fn misaligned_expect(
    op: &'static str,
    consts: &DerivedConstants,
    gl: &QuadratureRule,
    g: impl Fn(f64) -> f64,
) -> Result<f64> {
    gl.expect_kind(RuleKind::GaussLaguerre, op)?;
    let n = consts.n as f64;
    Ok(gl.iter_ln().map(|(x, ln_w)| (ln_w + x - x / n).exp() / n * g(x)).sum())
}

/// Ergodic secrecy rate `E[log₂(1 + ϖ₃ρX)] − E[log₂(1 + ϖ₄ρY)]` of the
/// conventional system, without the `[·]⁺` clamp.
pub fn er_sc(consts: &DerivedConstants, rho: f64, gl: &QuadratureRule, ctrl: &SeriesControl) -> Result<f64> {
    const OP: &str = "er_sc";
    let bob = coherent_expect(OP, consts, gl, ctrl, |x| (consts.varpi3 * rho * x).ln_1p())?;
    let willie = misaligned_expect(OP, consts, gl, |y| (consts.varpi4 * rho * y).ln_1p())?;
    Ok((bob - willie) / std::f64::consts::LN_2)
}

/// ρ-free ceiling `E[log₂(ϖ₃X)] − E[log₂(ϖ₄Y)]`.
pub fn er_sc_high_snr(consts: &DerivedConstants, gl: &QuadratureRule, ctrl: &SeriesControl) -> Result<f64> {
    const OP: &str = "er_sc_high_snr";
    let bob = coherent_expect(OP, consts, gl, ctrl, |x| (consts.varpi3 * x).log2())?;
    let willie = misaligned_expect(OP, consts, gl, |y| (consts.varpi4 * y).log2())?;
    Ok(bob - willie)
}

/// Probability of covert mode: the secrecy rate falls below `switch_threshold` (bit/s).
pub fn switch_probability(
    consts: &DerivedConstants,
    rho: f64,
    switch_threshold: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<f64> {
    op_sc(consts, rho, switch_threshold, gl, ctrl).map(|r| r.value)
}

fn covert_rate(consts: &DerivedConstants, rho: f64, gl: &QuadratureRule, ctrl: &SeriesControl) -> Result<f64> {
    let kr = consts.varpi3 * consts.kappa * rho;
    coherent_expect("er_jsacc", consts, gl, ctrl, |x| (kr * x).ln_1p() / std::f64::consts::LN_2)
}

/// Ergodic rate of the JSACC system: `(1 − ℙ) R_secrecy + ℙ R_covert`.
pub fn er_jsacc(
    consts: &DerivedConstants,
    rho: f64,
    switch_threshold: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let p = switch_probability(consts, rho, switch_threshold, gl, ctrl)?;
    let j1 = er_sc(consts, rho, gl, ctrl)?;
    let j2 = covert_rate(consts, rho, gl, ctrl)?;
    Ok((1.0 - p) * j1 + p * j2)
}

/// `E[1/X]` estimated by the same quadrature.
///
/// The one-degree-of-freedom law has a `x^{−1/2}` density at the origin, so the true
/// expectation diverges; the quadrature value is finite and grows with the order.
pub fn mean_inverse_gain(consts: &DerivedConstants, gl: &QuadratureRule, ctrl: &SeriesControl) -> Result<f64> {
    coherent_expect("mean_inverse_gain", consts, gl, ctrl, |x| 1.0 / x)
}

/// High-SNR bounds: the secrecy part uses its ρ-free ceiling and the covert
/// part is bracketed by Jensen's inequality on `E[X] = 1 + λ` and `E[1/X]`.
pub fn er_jsacc_high_snr(
    consts: &DerivedConstants,
    rho: f64,
    switch_threshold: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<ErBounds> {
    let p = switch_probability(consts, rho, switch_threshold, gl, ctrl)?;
    let j1 = er_sc_high_snr(consts, gl, ctrl)?;
    let kr = consts.varpi3 * consts.kappa * rho;
    let j2_upper = (kr * (1.0 + consts.lambda)).ln_1p() / std::f64::consts::LN_2;
    let j2_lower = (kr / mean_inverse_gain(consts, gl, ctrl)?).ln_1p() / std::f64::consts::LN_2;
    Ok(ErBounds { exact: None, upper: (1.0 - p) * j1 + p * j2_upper, lower: (1.0 - p) * j1 + p * j2_lower })
}

pub fn er_jsacc_with_bounds(
    consts: &DerivedConstants,
    rho: f64,
    switch_threshold: f64,
    gl: &QuadratureRule,
    ctrl: &SeriesControl,
) -> Result<ErBounds> {
    let mut b = er_jsacc_high_snr(consts, rho, switch_threshold, gl, ctrl)?;
    b.exact = Some(er_jsacc(consts, rho, switch_threshold, gl, ctrl)?);
    Ok(b)
}
