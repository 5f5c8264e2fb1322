//! Laws of the cascaded RIS channels and the sampler that realizes them.
//!
//! The coherent gain `|g_ARB|²`, normalized by `β² N (1 − μ)`, is approximated
//! by a noncentral χ² with one degree of freedom and noncentrality `λ`. The
//! misaligned gains (`g_ARW`, `g_JRB`, `g_JRW`) are approximately exponential
//! with mean `N`. Near zero the unnormalized sum `Q = Σ|h_RB,n||h_AR,n|` has
//! the power-law CDF of [`product_sum_cdf_small`].

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use std::f64::consts::{LN_2, TAU};

use crate::error::{Error, Result};
use crate::model::{DerivedConstants, SystemParams};
use crate::specfun::{ln_gamma_unchecked as ln_gamma, ln_regularized_lower_gamma, SeriesControl};

/// A series value together with the number of terms it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
}

fn check_ncx2(op: &'static str, x: f64, lambda: f64) -> Result<()> {
    if !(x >= 0.0) || x.is_nan() {
        return Err(Error::domain(op, format!("x must be nonnegative, got {x}")));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(op, format!("lambda must be positive and finite, got {lambda}")));
    }
    Ok(())
}

/// Density of the noncentral χ² law with one degree of freedom.
pub fn ncx2_pdf(x: f64, lambda: f64, ctrl: &SeriesControl) -> Result<f64> {
    ncx2_pdf_terms(x, lambda, ctrl).map(|v| v.value)
}

pub fn ncx2_pdf_terms(x: f64, lambda: f64, ctrl: &SeriesControl) -> Result<SeriesValue> {
    const OP: &str = "ncx2_pdf";
    check_ncx2(OP, x, lambda)?;
    if x == 0.0 {
        return Ok(SeriesValue { value: f64::INFINITY, terms: 1 });
    }
    if x.is_infinite() {
        return Ok(SeriesValue { value: 0.0, terms: 1 });
    }
    let half_l = 0.5 * lambda;
    let (ln_half_l, ln_x) = (half_l.ln(), x.ln());
    let ln_term = |i: f64| {
        -0.5 * (x + lambda) + i * ln_half_l - ln_gamma(i + 1.0) + (i - 0.5) * ln_x
            - (i + 0.5) * LN_2
            - ln_gamma(i + 0.5)
    };
    // t_{i+1}/t_i = λx / (4 (i+1)(i+½)); the peak sits where that ratio crosses 1
    let c = 0.25 * lambda * x;
    let ratio = |i: f64| c / ((i + 1.0) * (i + 0.5));
    let peak = {
        let root = (-1.5 + (0.25 + 4.0 * c).sqrt()) / 2.0;
        root.max(0.0).floor()
    };

    let mut rel_sum = 1.0;
    let mut terms = 1;
    let mut rel = 1.0;
    let mut i = peak;
    loop {
        rel *= ratio(i);
        i += 1.0;
        rel_sum += rel;
        terms += 1;
        if rel < ctrl.rel_tol * rel_sum {
            break;
        }
        if terms > ctrl.max_terms {
            return Err(Error::Convergence { op: OP, max_terms: ctrl.max_terms });
        }
    }
    rel = 1.0;
    i = peak;
    while i > 0.0 {
        rel /= ratio(i - 1.0);
        i -= 1.0;
        rel_sum += rel;
        terms += 1;
        if rel < ctrl.rel_tol * rel_sum {
            break;
        }
        if terms > ctrl.max_terms {
            return Err(Error::Convergence { op: OP, max_terms: ctrl.max_terms });
        }
    }
    Ok(SeriesValue { value: (ln_term(peak) + rel_sum.ln()).exp(), terms })
}

/// CDF of the noncentral χ² law with one degree of freedom, as a Poisson
/// mixture of regularized lower incomplete gammas.
pub fn ncx2_cdf(x: f64, lambda: f64, ctrl: &SeriesControl) -> Result<f64> {
    ncx2_cdf_terms(x, lambda, ctrl).map(|v| v.value)
}

pub fn ncx2_cdf_terms(x: f64, lambda: f64, ctrl: &SeriesControl) -> Result<SeriesValue> {
    const OP: &str = "ncx2_cdf";
    check_ncx2(OP, x, lambda)?;
    if x == 0.0 {
        return Ok(SeriesValue { value: 0.0, terms: 0 });
    }
    if x.is_infinite() {
        return Ok(SeriesValue { value: 1.0, terms: 0 });
    }
    let half_l = 0.5 * lambda;
    let ln_half_l = half_l.ln();
    let half_x = 0.5 * x;
    let ln_poisson = |i: f64| -half_l + i * ln_half_l - ln_gamma(i + 1.0);
    let term = |i: f64| -> Result<f64> {
        let lp = ln_regularized_lower_gamma(i + 0.5, half_x, ctrl).map_err(|e| match e {
            Error::Convergence { max_terms, .. } => Error::Convergence { op: OP, max_terms },
            other => other,
        })?;
        Ok((ln_poisson(i) + lp).exp())
    };

    let mode = half_l.floor();
    let mut sum = term(mode)?;
    let mut terms = 1;

    // right wing: both factors decrease past the mode
    let mut i = mode + 1.0;
    loop {
        let t = term(i)?;
        sum += t;
        terms += 1;
        if t <= ctrl.rel_tol * sum {
            break;
        }
        if terms > ctrl.max_terms {
            return Err(Error::Convergence { op: OP, max_terms: ctrl.max_terms });
        }
        i += 1.0;
    }

    // left wing: P ≤ 1 and Poisson weights shrink geometrically with ratio i/(λ/2)
    i = mode;
    while i > 0.0 {
        i -= 1.0;
        let t = term(i)?;
        sum += t;
        terms += 1;
        let r = i / half_l;
        let tail_bound = if r < 1.0 { ln_poisson(i).exp() * r / (1.0 - r) } else { f64::INFINITY };
        if tail_bound <= ctrl.rel_tol * sum {
            break;
        }
        if terms > ctrl.max_terms {
            return Err(Error::Convergence { op: OP, max_terms: ctrl.max_terms });
        }
    }
    Ok(SeriesValue { value: sum.clamp(0.0, 1.0), terms })
}

/// Small-argument CDF of `Q = Σ_n |h_RB,n||h_AR,n|` when `m_RB ≠ m_AR`:
/// `m̃^N (4 m_s m_l)^{−m_s N} P(2 m_s N, 2√(m_s m_l) q)`.
pub fn product_sum_cdf_small(q: f64, consts: &DerivedConstants, ctrl: &SeriesControl) -> Result<f64> {
    ln_product_sum_cdf_small(q, consts, ctrl).map(f64::exp)
}

pub fn ln_product_sum_cdf_small(q: f64, consts: &DerivedConstants, ctrl: &SeriesControl) -> Result<f64> {
    const OP: &str = "product_sum_cdf_small";
    let Some(m_tilde) = consts.m_tilde else {
        return Err(Error::domain(OP, "undefined when m_RB = m_AR"));
    };
    if !(q >= 0.0) || q.is_nan() {
        return Err(Error::domain(OP, format!("q must be nonnegative, got {q}")));
    }
    if q == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let n = consts.n as f64;
    let (ms, ml) = (consts.m_s, consts.m_l);
    let shape = 2.0 * ms * n;
    Ok(n * m_tilde.ln() - ms * n * (4.0 * ms * ml).ln()
        + ln_regularized_lower_gamma(shape, 2.0 * (ms * ml).sqrt() * q, ctrl)?)
}

/// CDF `1 − e^{−x/N}` of a misaligned cascaded gain.
pub fn exp_gain_cdf(x: f64, n: usize) -> Result<f64> {
    if !(x >= 0.0) || x.is_nan() {
        return Err(Error::domain("exp_gain_cdf", format!("x must be nonnegative, got {x}")));
    }
    if n == 0 {
        return Err(Error::domain("exp_gain_cdf", "N must be at least 1"));
    }
    Ok(-(-x / n as f64).exp_m1())
}

/// One draw of every fading vector and the gains they induce.
///
/// Gains include `β²` but no path loss.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelRealization {
    pub h_ar: Vec<Complex64>,
    pub h_jr: Vec<Complex64>,
    pub h_rb: Vec<Complex64>,
    pub h_rw: Vec<Complex64>,
    pub theta_star: Vec<f64>,
    pub gain_arb: f64,
    pub gain_arw: f64,
    pub gain_jrb: f64,
    pub gain_jrw: f64,
    /// Uniform on [0, 1]; the jammer transmits `jammer_fraction · P_J^max`.
    pub jammer_fraction: f64,
    pub jammer_power_pj: f64,
}

impl ChannelRealization {
    /// Jammer power for a different `P_J^max`, reusing the same uniform draw.
    pub fn jammer_power_for(&self, p_j_max: f64) -> f64 {
        self.jammer_fraction * p_j_max
    }
}

/// Reusable Nakagami sampler for one parameter set.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    n: usize,
    beta2: f64,
    p_j_max: f64,
    theta_offset: f64,
    power_ar: Gamma<f64>,
    power_jr: Gamma<f64>,
    power_rb: Gamma<f64>,
    power_rw: Gamma<f64>,
}

fn unit_power(name: &str, m: f64) -> Result<Gamma<f64>> {
    Gamma::new(m, 1.0 / m).map_err(|e| Error::param(name, e.to_string()))
}

impl ChannelSampler {
    pub fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        Ok(ChannelSampler {
            n: params.num_elements_n,
            beta2: params.beta * params.beta,
            p_j_max: params.p_j_max(),
            theta_offset: 0.0,
            power_ar: unit_power("m_ar", params.m_ar)?,
            power_jr: unit_power("m_jr", params.m_jr)?,
            power_rb: unit_power("m_rb", params.m_rb)?,
            power_rw: unit_power("m_rw", params.m_rw)?,
        })
    }

    /// Common phase `θ̃` added to every optimal RIS phase. Defaults to 0.
    pub fn with_theta_offset(mut self, theta: f64) -> Self {
        self.theta_offset = theta;
        self
    }

    fn nakagami<R: Rng + ?Sized>(power: &Gamma<f64>, rng: &mut R) -> Complex64 {
        let amp = power.sample(rng).sqrt();
        let phase = rng.random::<f64>() * TAU;
        Complex64::from_polar(amp, phase)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelRealization {
        let mut out = ChannelRealization::default();
        self.sample_into(rng, &mut out);
        out
    }

    /// Overwrites `out`, reusing its buffers.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut ChannelRealization) {
        for v in [&mut out.h_ar, &mut out.h_jr, &mut out.h_rb, &mut out.h_rw] {
            v.clear();
        }
        out.theta_star.clear();
        let mut coherent = 0.0;
        let (mut arw, mut jrb, mut jrw) = (Complex64::ZERO, Complex64::ZERO, Complex64::ZERO);
        for _ in 0..self.n {
            let h_ar = Self::nakagami(&self.power_ar, rng);
            let h_jr = Self::nakagami(&self.power_jr, rng);
            let h_rb = Self::nakagami(&self.power_rb, rng);
            let h_rw = Self::nakagami(&self.power_rw, rng);
            let theta = self.theta_offset - h_rb.arg() - h_ar.arg();
            let phase = Complex64::cis(theta);
            coherent += h_rb.norm() * h_ar.norm();
            arw += h_rw * phase * h_ar;
            jrb += h_rb * phase * h_jr;
            jrw += h_rw * phase * h_jr;
            out.h_ar.push(h_ar);
            out.h_jr.push(h_jr);
            out.h_rb.push(h_rb);
            out.h_rw.push(h_rw);
            out.theta_star.push(theta);
        }
        out.gain_arb = self.beta2 * coherent * coherent;
        out.gain_arw = self.beta2 * arw.norm_sqr();
        out.gain_jrb = self.beta2 * jrb.norm_sqr();
        out.gain_jrw = self.beta2 * jrw.norm_sqr();
        out.jammer_fraction = rng.random::<f64>();
        out.jammer_power_pj = out.jammer_fraction * self.p_j_max;
    }
}

/// Draws one realization with `θ̃ = 0`.
pub fn sample_realization<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Result<ChannelRealization> {
    Ok(ChannelSampler::new(params)?.sample(rng))
}
