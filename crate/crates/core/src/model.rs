//! Physical parameters of the RIS-aided link and every constant derived from them.
//!
//! Path loss follows `L(d) = d^{−α}`; the four cascaded losses are
//! `L1 = L(d_RB) L(d_AR)`, `L2 = L(d_RW) L(d_AR)`, `L3 = L(d_RB) L(d_JR)` and
//! `L4 = L(d_RW) L(d_JR)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::specfun::ln_gamma_unchecked as ln_gamma;

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Hz.
    pub bandwidth_b: f64,
    /// RIS amplitude reflection coefficient, identical for every element.
    pub beta: f64,
    pub num_elements_n: usize,
    pub d_ar: f64,
    pub d_jr: f64,
    pub d_rb: f64,
    pub d_rw: f64,
    pub alpha_ar: f64,
    pub alpha_jr: f64,
    pub alpha_rb: f64,
    pub alpha_rw: f64,
    pub m_ar: f64,
    pub m_jr: f64,
    pub m_rb: f64,
    pub m_rw: f64,
    /// W. Split as `P_A = κ P_t`, `P_J^max = (1 − κ) P_t`.
    pub total_power_pt: f64,
    pub kappa: f64,
    /// W.
    pub noise_b: f64,
    /// W.
    pub noise_w: f64,
    /// bit/s.
    pub target_rate_rbar: f64,
    /// bit/s; the secrecy-rate level that toggles between secrecy and covert mode.
    pub switch_threshold: f64,
    /// Residual jamming at Bob. Every closed form assumes 0; only the simulator honors it.
    pub self_interference_varrho: f64,
}

/// Keys accepted in a parameter file, in declaration order.
pub const PARAM_KEYS: [&str; 22] = [
    "bandwidth_b",
    "beta",
    "num_elements_n",
    "d_ar",
    "d_jr",
    "d_rb",
    "d_rw",
    "alpha_ar",
    "alpha_jr",
    "alpha_rb",
    "alpha_rw",
    "m_ar",
    "m_jr",
    "m_rb",
    "m_rw",
    "total_power_pt",
    "kappa",
    "noise_b",
    "noise_w",
    "target_rate_rbar",
    "switch_threshold",
    "self_interference_varrho",
];

impl SystemParams {
    /// Reference geometry and fading: B = 1 MHz, β = 0.9, d_AR = d_JR = 100 m,
    /// d_RB = d_RW = 50 m, α = 3 / 1.5, m = 3 / 1.5, R̄ = 0.1 Mbit/s.
    ///
    /// Noise powers default to 1 W and κ to 0.5; the switch threshold equals R̄.
    pub fn table1(num_elements_n: usize, total_power_pt: f64) -> Self {
        SystemParams {
            bandwidth_b: 1e6,
            beta: 0.9,
            num_elements_n,
            d_ar: 100.0,
            d_jr: 100.0,
            d_rb: 50.0,
            d_rw: 50.0,
            alpha_ar: 3.0,
            alpha_jr: 3.0,
            alpha_rb: 1.5,
            alpha_rw: 1.5,
            m_ar: 3.0,
            m_jr: 3.0,
            m_rb: 1.5,
            m_rw: 1.5,
            total_power_pt,
            kappa: 0.5,
            noise_b: 1.0,
            noise_w: 1.0,
            target_rate_rbar: 1e5,
            switch_threshold: 1e5,
            self_interference_varrho: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be positive and finite, got {v}")))
            }
        }
        positive("bandwidth_b", self.bandwidth_b)?;
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::param("beta", format!("must lie in (0, 1], got {}", self.beta)));
        }
        if self.num_elements_n < 1 {
            return Err(Error::param("num_elements_n", "must be at least 1"));
        }
        for (name, d) in [("d_ar", self.d_ar), ("d_jr", self.d_jr), ("d_rb", self.d_rb), ("d_rw", self.d_rw)] {
            positive(name, d)?;
        }
        for (name, a) in [
            ("alpha_ar", self.alpha_ar),
            ("alpha_jr", self.alpha_jr),
            ("alpha_rb", self.alpha_rb),
            ("alpha_rw", self.alpha_rw),
        ] {
            if !a.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        for (name, m) in [("m_ar", self.m_ar), ("m_jr", self.m_jr), ("m_rb", self.m_rb), ("m_rw", self.m_rw)] {
            if !(m >= 0.5) || !m.is_finite() {
                return Err(Error::param(name, format!("Nakagami parameter must be >= 0.5, got {m}")));
            }
        }
        positive("total_power_pt", self.total_power_pt)?;
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::param("kappa", format!("must lie in (0, 1), got {}", self.kappa)));
        }
        positive("noise_b", self.noise_b)?;
        positive("noise_w", self.noise_w)?;
        if !(self.target_rate_rbar >= 0.0) || !self.target_rate_rbar.is_finite() {
            return Err(Error::param("target_rate_rbar", "must be nonnegative"));
        }
        if !(self.switch_threshold >= 0.0) || !self.switch_threshold.is_finite() {
            return Err(Error::param("switch_threshold", "must be nonnegative"));
        }
        if !(0.0..=1.0).contains(&self.self_interference_varrho) {
            return Err(Error::param("self_interference_varrho", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn p_a(&self) -> f64 {
        self.kappa * self.total_power_pt
    }

    pub fn p_j_max(&self) -> f64 {
        (1.0 - self.kappa) * self.total_power_pt
    }

    /// Transmit SNR `ρ = P_t / σ_B²`.
    pub fn rho(&self) -> f64 {
        self.total_power_pt / self.noise_b
    }

    /// Copy with `P_t` chosen so that `ρ` equals `rho_db` (in dB).
    pub fn with_rho_db(&self, rho_db: f64) -> Self {
        let mut p = self.clone();
        p.total_power_pt = db_to_linear(rho_db) * self.noise_b;
        p
    }

    /// Power split parameterized by `ξ = P_A / (P_A + P̄_J)` with `P̄_J = P_J^max / 2`,
    /// the mean of the uniform jammer law. Solving for κ gives `κ = ξ / (2 − ξ)`.
    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(Error::param("xi", format!("must lie in (0, 1), got {xi}")));
        }
        let mut p = self.clone();
        p.kappa = xi / (2.0 - xi);
        Ok(p)
    }

    pub fn xi(&self) -> f64 {
        let pa = self.p_a();
        pa / (pa + 0.5 * self.p_j_max())
    }

    /// Copy with explicit Alice and jammer powers in W.
    pub fn with_powers(&self, p_a: f64, p_j_max: f64) -> Result<Self> {
        if !(p_a > 0.0 && p_j_max > 0.0) {
            return Err(Error::param("powers", format!("P_A and P_J^max must be positive, got {p_a}, {p_j_max}")));
        }
        let mut p = self.clone();
        p.total_power_pt = p_a + p_j_max;
        p.kappa = p_a / p.total_power_pt;
        Ok(p)
    }

    /// Parses a `key = value` parameter file. Unknown keys are errors.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let entries = parse_key_values(text)?;
        let mut builder = ParamsBuilder::default();
        for e in &entries {
            builder.set(&e.key, &e.value, e.line)?;
        }
        builder.build()
    }

    /// Renders the parameters in the file format accepted by [`SystemParams::from_config_str`].
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for key in PARAM_KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key).expect("known key"));
        }
        out
    }

    fn get(&self, key: &str) -> Option<String> {
        let v = match key {
            "bandwidth_b" => self.bandwidth_b,
            "beta" => self.beta,
            "num_elements_n" => return Some(self.num_elements_n.to_string()),
            "d_ar" => self.d_ar,
            "d_jr" => self.d_jr,
            "d_rb" => self.d_rb,
            "d_rw" => self.d_rw,
            "alpha_ar" => self.alpha_ar,
            "alpha_jr" => self.alpha_jr,
            "alpha_rb" => self.alpha_rb,
            "alpha_rw" => self.alpha_rw,
            "m_ar" => self.m_ar,
            "m_jr" => self.m_jr,
            "m_rb" => self.m_rb,
            "m_rw" => self.m_rw,
            "total_power_pt" => self.total_power_pt,
            "kappa" => self.kappa,
            "noise_b" => self.noise_b,
            "noise_w" => self.noise_w,
            "target_rate_rbar" => self.target_rate_rbar,
            "switch_threshold" => self.switch_threshold,
            "self_interference_varrho" => self.self_interference_varrho,
            _ => return None,
        };
        Some(format!("{v:e}"))
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    db_to_linear(dbm - 30.0)
}

/// One `key = value` line of a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigEntry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

/// Splits a config file into entries. `#` starts a comment; blank lines are skipped.
/// Duplicate keys are rejected.
pub fn parse_key_values(text: &str) -> Result<Vec<ConfigEntry>> {
    let mut out: Vec<ConfigEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(Error::Config { line, msg: format!("expected `key = value`, got `{content}`") });
        };
        let key = k.trim().to_string();
        let value = v.trim().to_string();
        if key.is_empty() {
            return Err(Error::Config { line, msg: "empty key".into() });
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(Error::Config { line, msg: format!("duplicate key `{key}` (first set on line {})", prev.line) });
        }
        out.push(ConfigEntry { line, key, value });
    }
    Ok(out)
}

/// Accumulates parameter-file entries; missing keys fall back to the reference
/// defaults of [`SystemParams::table1`] except `num_elements_n` and `total_power_pt`.
#[derive(Debug, Clone, Default)]
pub struct ParamsBuilder {
    values: Vec<(&'static str, f64)>,
}

impl ParamsBuilder {
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let Some(&known) = PARAM_KEYS.iter().find(|k| **k == key) else {
            return Err(Error::Config { line, msg: format!("unknown key `{key}`") });
        };
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Config { line, msg: format!("`{key}`: cannot parse `{value}` as a number") })?;
        if known == "num_elements_n" && (v.fract() != 0.0 || v < 1.0) {
            return Err(Error::Config { line, msg: format!("`num_elements_n` must be a positive integer, got `{value}`") });
        }
        self.values.retain(|(k, _)| *k != known);
        self.values.push((known, v));
        Ok(())
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.iter().any(|(k, _)| *k == key)
    }

    pub fn build(&self) -> Result<SystemParams> {
        let lookup = |k: &str| self.values.iter().find(|(key, _)| *key == k).map(|(_, v)| *v);
        let n = lookup("num_elements_n")
            .ok_or_else(|| Error::Config { line: 0, msg: "missing required key `num_elements_n`".into() })?;
        let pt = lookup("total_power_pt")
            .ok_or_else(|| Error::Config { line: 0, msg: "missing required key `total_power_pt`".into() })?;
        let mut p = SystemParams::table1(n as usize, pt);
        let mut switch_set = false;
        for (k, v) in &self.values {
            let v = *v;
            match *k {
                "bandwidth_b" => p.bandwidth_b = v,
                "beta" => p.beta = v,
                "d_ar" => p.d_ar = v,
                "d_jr" => p.d_jr = v,
                "d_rb" => p.d_rb = v,
                "d_rw" => p.d_rw = v,
                "alpha_ar" => p.alpha_ar = v,
                "alpha_jr" => p.alpha_jr = v,
                "alpha_rb" => p.alpha_rb = v,
                "alpha_rw" => p.alpha_rw = v,
                "m_ar" => p.m_ar = v,
                "m_jr" => p.m_jr = v,
                "m_rb" => p.m_rb = v,
                "m_rw" => p.m_rw = v,
                "kappa" => p.kappa = v,
                "noise_b" => p.noise_b = v,
                "noise_w" => p.noise_w = v,
                "target_rate_rbar" => p.target_rate_rbar = v,
                "switch_threshold" => {
                    p.switch_threshold = v;
                    switch_set = true;
                }
                "self_interference_varrho" => p.self_interference_varrho = v,
                _ => {}
            }
        }
        if !switch_set {
            p.switch_threshold = p.target_rate_rbar;
        }
        p.validate()?;
        Ok(p)
    }
}

/// Every derived symbol used by the closed forms.
///
/// Quantities that depend on ρ (ϖ₂, c̃₂) are exposed as methods.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants {
    pub n: usize,
    pub beta: f64,
    pub kappa: f64,
    pub bandwidth: f64,
    pub target_rate: f64,
    pub switch_threshold: f64,
    pub noise_b: f64,
    pub noise_w: f64,
    pub total_power: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub mu: f64,
    pub lambda: f64,
    pub m_s: f64,
    pub m_l: f64,
    /// `None` when `m_RB = m_AR`, where the small-argument law is undefined.
    pub m_tilde: Option<f64>,
    pub varpi1: f64,
    pub varpi3: f64,
    pub varpi4: f64,
    pub c_tilde1: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub p_a: f64,
    pub p_j_max: f64,
}

fn path_loss(d: f64, alpha: f64) -> f64 {
    d.powf(-alpha)
}

/// `Γ(m + 1/2) / Γ(m)`, the mean amplitude of a unit-power Nakagami-m variable times √m.
fn half_ratio(m: f64) -> f64 {
    (ln_gamma(m + 0.5) - ln_gamma(m)).exp()
}

pub fn derive(params: &SystemParams) -> Result<DerivedConstants> {
    params.validate()?;
    let l1 = path_loss(params.d_rb, params.alpha_rb) * path_loss(params.d_ar, params.alpha_ar);
    let l2 = path_loss(params.d_rw, params.alpha_rw) * path_loss(params.d_ar, params.alpha_ar);
    let l3 = path_loss(params.d_rb, params.alpha_rb) * path_loss(params.d_jr, params.alpha_jr);
    let l4 = path_loss(params.d_rw, params.alpha_rw) * path_loss(params.d_jr, params.alpha_jr);

    let (m_rb, m_ar) = (params.m_rb, params.m_ar);
    let mu = half_ratio(m_rb).powi(2) * half_ratio(m_ar).powi(2) / (m_rb * m_ar);
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Degenerate(format!("mu = {mu} is outside (0, 1)")));
    }
    let n = params.num_elements_n as f64;
    let lambda = n * mu / (1.0 - mu);
    let m_s = m_rb.min(m_ar);
    let m_l = m_rb.max(m_ar);
    let m_tilde = (m_l > m_s).then(|| {
        let ln = 0.5 * PI.ln()
            + (m_s - m_l + 1.0) * 4f64.ln()
            + m_s * (m_s * m_l).ln()
            + ln_gamma(2.0 * m_s)
            + ln_gamma(2.0 * m_l - 2.0 * m_s)
            - ln_gamma(m_s)
            - ln_gamma(m_l)
            - ln_gamma(m_l - m_s + 0.5);
        ln.exp()
    });

    let beta2 = params.beta * params.beta;
    let rate_exp = params.target_rate_rbar / params.bandwidth_b;
    let varpi3 = l1 * beta2 * n * (1.0 - mu);
    let varpi4 = l2 * beta2;
    let varpi1 = exp2_m1(rate_exp) / varpi3;
    let c_tilde1 = (exp2_m1(rate_exp) / (beta2 * l1)).sqrt();

    let p_a = params.p_a();
    let p_j_max = params.p_j_max();
    Ok(DerivedConstants {
        n: params.num_elements_n,
        beta: params.beta,
        kappa: params.kappa,
        bandwidth: params.bandwidth_b,
        target_rate: params.target_rate_rbar,
        switch_threshold: params.switch_threshold,
        noise_b: params.noise_b,
        noise_w: params.noise_w,
        total_power: params.total_power_pt,
        l1,
        l2,
        l3,
        l4,
        mu,
        lambda,
        m_s,
        m_l,
        m_tilde,
        varpi1,
        varpi3,
        varpi4,
        c_tilde1,
        eta1: p_j_max * l4,
        eta2: p_a * l2,
        p_a,
        p_j_max,
    })
}

/// `2^r − 1` without cancellation at small `r`.
pub fn exp2_m1(r: f64) -> f64 {
    (r * std::f64::consts::LN_2).exp_m1()
}

impl DerivedConstants {
    /// Transmit SNR `ρ = P_t / σ_B²` of the parameter set these constants came from.
    pub fn rho(&self) -> f64 {
        self.total_power / self.noise_b
    }

    /// Normalized rate `R / B` in bit/s/Hz.
    pub fn normalized(&self, rate_bps: f64) -> f64 {
        rate_bps / self.bandwidth
    }

    /// ϖ₁ for an arbitrary rate target in bit/s. The stored field is used as-is at
    /// the configured target rate.
    pub fn varpi1_for(&self, rate_bps: f64) -> f64 {
        if rate_bps == self.target_rate {
            self.varpi1
        } else {
            exp2_m1(self.normalized(rate_bps)) / self.varpi3
        }
    }

    /// ϖ₂ at SNR `rho`, for rate target `rate_bps`: the jammer-law breakpoint of the outage integral.
    pub fn varpi2(&self, rho: f64, rate_bps: f64) -> f64 {
        let n = self.n as f64;
        let r = self.normalized(rate_bps);
        self.varpi1_for(rate_bps) * (1.0 - self.kappa) * self.l1 * n * (1.0 - self.mu)
            / (rho * self.kappa * self.l2 * r.exp2())
    }

    /// c̃₂ at SNR `rho` for the configured target rate.
    pub fn c_tilde2(&self, rho: f64) -> f64 {
        let r = self.normalized(self.target_rate);
        self.c_tilde1 * self.c_tilde1 * (1.0 - self.kappa) * self.l1 / (self.kappa * r.exp2() * self.l2) / rho
    }
}
