//! Brute-force simulation of the JSACC protocol.
//!
//! Trials are grouped in fixed-size chunks; chunk `c` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `c`, so an estimate depends only
//! on `(seed, trials)` and never on the worker count. Per-chunk moments are
//! merged pairwise in chunk order.
//!
//! A single run can evaluate many scenarios against the same realizations
//! (common random numbers) as long as they share N, β and the fading
//! parameters; path loss, powers, noise and thresholds may differ.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::analytic::min_dep;
use crate::channel_stats::{ChannelRealization, ChannelSampler};
use crate::error::{Error, Result};
use crate::model::{derive, DerivedConstants, SystemParams};

/// Trials per chunk. Part of the reproducibility contract: changing it changes every estimate.
pub const CHUNK_TRIALS: u64 = 4096;
pub const MIN_TRIALS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricId {
    OpJsacc,
    OpSc,
    ErJsacc,
    /// Unclamped `R_B − R_W` of the conventional system.
    ErSc,
    /// `[R_B − R_W]⁺`.
    ErScClamped,
    SwitchProb,
    Amdep,
    SecurityRateFixed,
    SecurityRateAdaptive,
    /// JSACC outage without a conventional secrecy outage; zero when `⋍ = R̄`.
    OutageInclusionViolation,
}

impl MetricId {
    pub const ALL: [MetricId; 10] = [
        MetricId::OpJsacc,
        MetricId::OpSc,
        MetricId::ErJsacc,
        MetricId::ErSc,
        MetricId::ErScClamped,
        MetricId::SwitchProb,
        MetricId::Amdep,
        MetricId::SecurityRateFixed,
        MetricId::SecurityRateAdaptive,
        MetricId::OutageInclusionViolation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::OpJsacc => "op_jsacc",
            MetricId::OpSc => "op_sc",
            MetricId::ErJsacc => "er_jsacc",
            MetricId::ErSc => "er_sc",
            MetricId::ErScClamped => "er_sc_clamped",
            MetricId::SwitchProb => "switch_prob",
            MetricId::Amdep => "amdep",
            MetricId::SecurityRateFixed => "security_rate_fixed",
            MetricId::SecurityRateAdaptive => "security_rate_adaptive",
            MetricId::OutageInclusionViolation => "outage_inclusion_violation",
        }
    }

    /// Per-trial values are 0/1.
    pub fn is_indicator(self) -> bool {
        matches!(
            self,
            MetricId::OpJsacc | MetricId::OpSc | MetricId::SwitchProb | MetricId::OutageInclusionViolation
        )
    }

    pub fn is_probability(self) -> bool {
        !matches!(self, MetricId::ErJsacc | MetricId::ErSc | MetricId::ErScClamped)
    }

    pub fn is_rate(self) -> bool {
        !self.is_probability()
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        MetricId::ALL
            .into_iter()
            .find(|m| m.name() == key || format!("{m:?}").to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Usage(format!("unknown metric `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub metric_id: MetricId,
    pub mean: f64,
    pub stderr: f64,
    pub n_trials: u64,
}

impl MetricEstimate {
    /// Standard error to use when comparing against a model.
    ///
    /// For 0/1 metrics the sample value collapses to 0 when no or all trials hit;
    /// this uses `p̃ = (k + ½)/(n + 1)` instead, which stays positive.
    pub fn comparison_stderr(&self) -> f64 {
        if self.metric_id.is_indicator() {
            let n = self.n_trials as f64;
            let p = (self.mean * n + 0.5) / (n + 1.0);
            (p * (1.0 - p) / n).sqrt()
        } else {
            self.stderr
        }
    }

    /// Distance from `value` in units of [`MetricEstimate::comparison_stderr`].
    pub fn z_score(&self, value: f64) -> f64 {
        let se = self.comparison_stderr();
        if se > 0.0 {
            (self.mean - value).abs() / se
        } else if self.mean == value {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Secrecy,
    Covert,
}

/// Everything one realization implies, rates in bit/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerTrialRecord {
    pub sinr_b_sc: f64,
    pub sinr_w_sc: f64,
    pub sinr_b_cc: f64,
    pub sinr_w_cc: f64,
    pub rate_b_sc: f64,
    pub rate_w_sc: f64,
    pub rate_b_cc: f64,
    pub rate_w_cc: f64,
    /// Clamped secrecy rate.
    pub secrecy_rate: f64,
    pub mode: Mode,
    pub outage_jsacc: bool,
    pub outage_sc: bool,
    pub zeta1: f64,
    pub zeta2: f64,
    pub zeta3: f64,
    pub min_dep: f64,
}

/// Applies the protocol to one realization at SNR `rho` (`P_t = ρ σ_B²`), using
/// the rest of `params` for powers split, noise and thresholds.
pub fn evaluate_realization(
    real: &ChannelRealization,
    params: &SystemParams,
    consts: &DerivedConstants,
    rho: f64,
) -> PerTrialRecord {
    let pt = rho * params.noise_b;
    let p_a = params.kappa * pt;
    let p_j_max = (1.0 - params.kappa) * pt;
    let p_j = real.jammer_power_for(p_j_max);
    let g_b = real.gain_arb * consts.l1;
    let g_w = real.gain_arw * consts.l2;

    let sinr_b_sc = pt * g_b / params.noise_b;
    let sinr_w_sc = pt * g_w / params.noise_w;
    let jam_b = params.self_interference_varrho * p_j * real.gain_jrb * consts.l3;
    let sinr_b_cc = p_a * g_b / (jam_b + params.noise_b);
    let zeta1 = real.gain_jrw * consts.l4;
    let sinr_w_cc = p_a * g_w / (p_j * zeta1 + params.noise_w);

    let rate_b_sc = sinr_b_sc.ln_1p() / std::f64::consts::LN_2;
    let rate_w_sc = sinr_w_sc.ln_1p() / std::f64::consts::LN_2;
    let rate_b_cc = sinr_b_cc.ln_1p() / std::f64::consts::LN_2;
    let rate_w_cc = sinr_w_cc.ln_1p() / std::f64::consts::LN_2;
    let secrecy_rate = (rate_b_sc - rate_w_sc).max(0.0);
    let switch = params.switch_threshold / params.bandwidth_b;
    let target = params.target_rate_rbar / params.bandwidth_b;
    let mode = if secrecy_rate >= switch && !(secrecy_rate == 0.0 && switch == 0.0) {
        Mode::Secrecy
    } else {
        Mode::Covert
    };

    let zeta2 = params.noise_w;
    let zeta3 = p_a * g_w + params.noise_w;
    let min_dep = if zeta1 > 0.0 {
        min_dep(zeta1, zeta2, zeta3, p_j_max).map(|m| m.value).unwrap_or(0.0)
    } else {
        0.0
    };
    PerTrialRecord {
        sinr_b_sc,
        sinr_w_sc,
        sinr_b_cc,
        sinr_w_cc,
        rate_b_sc,
        rate_w_sc,
        rate_b_cc,
        rate_w_cc,
        secrecy_rate,
        mode,
        outage_jsacc: mode == Mode::Covert && rate_b_cc < target,
        outage_sc: secrecy_rate < target,
        zeta1,
        zeta2,
        zeta3,
        min_dep,
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn metric_value(metric: MetricId, rec: &PerTrialRecord, params: &SystemParams) -> f64 {
    match metric {
        MetricId::OpJsacc => indicator(rec.outage_jsacc),
        MetricId::OpSc => indicator(rec.outage_sc),
        MetricId::ErJsacc => match rec.mode {
            Mode::Secrecy => rec.secrecy_rate,
            Mode::Covert => rec.rate_b_cc,
        },
        MetricId::ErSc => rec.rate_b_sc - rec.rate_w_sc,
        MetricId::ErScClamped => rec.secrecy_rate,
        MetricId::SwitchProb => indicator(rec.mode == Mode::Covert),
        MetricId::Amdep => rec.min_dep,
        MetricId::SecurityRateFixed => {
            let target = params.target_rate_rbar / params.bandwidth_b;
            if rec.secrecy_rate >= target && rec.secrecy_rate > 0.0 {
                1.0
            } else {
                rec.min_dep
            }
        }
        MetricId::SecurityRateAdaptive => match rec.mode {
            Mode::Secrecy => 1.0,
            Mode::Covert => rec.min_dep,
        },
        MetricId::OutageInclusionViolation => indicator(rec.outage_jsacc && !rec.outage_sc),
    }
}

/// Running count, mean and centered second moment.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let (na, nb) = (a.n as f64, b.n as f64);
        Moments {
            n,
            mean: a.mean + d * nb / n as f64,
            m2: a.m2 + b.m2 + d * d * na * nb / n as f64,
        }
    }

    fn estimate(&self, metric_id: MetricId) -> MetricEstimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        MetricEstimate { metric_id, mean: self.mean, stderr: (var.max(0.0) / self.n as f64).sqrt(), n_trials: self.n }
    }
}

fn pairwise_reduce(mut parts: Vec<Vec<Moments>>) -> Vec<Moments> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.into_iter().zip(b).map(|(x, y)| Moments::merge(x, y)).collect()),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

/// Worker count: `JSACC_THREADS` if set to a positive integer, else all cores.
pub fn worker_count() -> usize {
    std::env::var("JSACC_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(worker_count())
            .build()
            .expect("thread pool construction")
    })
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `kernel` once per trial; it writes `outputs` values per trial.
fn run_chunked<S, I, K>(trials: u64, seed: u64, outputs: usize, init: I, kernel: K) -> Vec<Moments>
where
    I: Fn() -> S + Sync,
    K: Fn(&mut ChaCha8Rng, &mut S, &mut [f64]) + Sync,
{
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let parts: Vec<Vec<Moments>> = pool().install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(seed, c);
                let mut state = init();
                let mut acc = vec![Moments::default(); outputs];
                let mut out = vec![0.0; outputs];
                let len = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
                for _ in 0..len {
                    kernel(&mut rng, &mut state, &mut out);
                    for (m, &x) in acc.iter_mut().zip(&out) {
                        m.push(x);
                    }
                }
                acc
            })
            .collect()
    });
    pairwise_reduce(parts)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::param("trials", format!("must be at least {MIN_TRIALS}, got {trials}")));
    }
    Ok(())
}

fn same_channel_law(a: &SystemParams, b: &SystemParams) -> bool {
    a.num_elements_n == b.num_elements_n
        && a.beta == b.beta
        && a.m_ar == b.m_ar
        && a.m_jr == b.m_jr
        && a.m_rb == b.m_rb
        && a.m_rw == b.m_rw
}

/// Estimates `metrics` for every scenario from one shared set of realizations.
/// Returns `result[scenario][metric]`.
pub fn run_scenarios(
    scenarios: &[SystemParams],
    metrics: &[MetricId],
    trials: u64,
    seed: u64,
) -> Result<Vec<Vec<MetricEstimate>>> {
    check_trials(trials)?;
    let Some(first) = scenarios.first() else {
        return Ok(Vec::new());
    };
    if let Some(bad) = scenarios.iter().find(|p| !same_channel_law(first, p)) {
        return Err(Error::param(
            "scenarios",
            format!("common random numbers need identical N, beta and fading parameters; got {bad:?}"),
        ));
    }
    let prepared: Vec<(SystemParams, DerivedConstants)> =
        scenarios.iter().map(|p| derive(p).map(|c| (p.clone(), c))).collect::<Result<_>>()?;
    let sampler = ChannelSampler::new(first)?;
    let width = metrics.len();
    let moments = run_chunked(
        trials,
        seed,
        prepared.len() * width,
        ChannelRealization::default,
        |rng, real, out| {
            sampler.sample_into(rng, real);
            for (s, (p, c)) in prepared.iter().enumerate() {
                let rec = evaluate_realization(real, p, c, p.rho());
                for (k, &m) in metrics.iter().enumerate() {
                    out[s * width + k] = metric_value(m, &rec, p);
                }
            }
        },
    );
    Ok((0..prepared.len())
        .map(|s| metrics.iter().enumerate().map(|(k, &m)| moments[s * width + k].estimate(m)).collect())
        .collect())
}

/// Single-metric, single-scenario estimate.
pub fn estimate(metric_id: MetricId, params: &SystemParams, trials: u64, seed: u64) -> Result<MetricEstimate> {
    Ok(run_scenarios(std::slice::from_ref(params), &[metric_id], trials, seed)?[0][0])
}

/// Minimum DEP averaged over independent exponential `|g_JRW|²` and `|g_ARW|²`
/// of mean N: the statistical-CSI model behind the closed-form AMDEP. One
/// estimate per `(P_A, P_J^max)` pair in W, sharing draws.
pub fn estimate_amdep_statistical(
    params: &SystemParams,
    power_pairs: &[(f64, f64)],
    trials: u64,
    seed: u64,
) -> Result<Vec<MetricEstimate>> {
    check_trials(trials)?;
    let consts = derive(params)?;
    let exp = Exp::new(1.0 / params.num_elements_n as f64).map_err(|e| Error::param("num_elements_n", e.to_string()))?;
    let ratios: Vec<f64> = power_pairs
        .iter()
        .map(|&(p_a, p_j)| {
            if p_a > 0.0 && p_j > 0.0 {
                Ok((p_a * consts.l2) / (p_j * consts.l4))
            } else {
                Err(Error::param("power_pairs", format!("powers must be positive, got ({p_a}, {p_j})")))
            }
        })
        .collect::<Result<_>>()?;
    let moments = run_chunked(trials, seed, ratios.len(), || (), |rng, _, out| {
        let x = exp.sample(rng);
        let y = exp.sample(rng);
        for (o, r) in out.iter_mut().zip(&ratios) {
            *o = (1.0 - r * y / x).max(0.0);
        }
    });
    Ok(moments.iter().map(|m| m.estimate(MetricId::Amdep)).collect())
}

/// Draws `trials` realizations with the crate's chunked seeding and hands each
/// to `visit` in trial order. Single-threaded; meant for tests and diagnostics.
pub fn for_each_realization<F>(params: &SystemParams, trials: u64, seed: u64, mut visit: F) -> Result<()>
where
    F: FnMut(&ChannelRealization),
{
    let sampler = ChannelSampler::new(params)?;
    let mut real = ChannelRealization::default();
    let chunks = trials.div_ceil(CHUNK_TRIALS);
    for c in 0..chunks {
        let mut rng = chunk_rng(seed, c);
        for _ in 0..CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS) {
            sampler.sample_into(&mut rng, &mut real);
            visit(&real);
        }
    }
    Ok(())
}
