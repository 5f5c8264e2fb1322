//! Parameter sweeps that pair every closed form with its Monte Carlo estimate
//! and write the result as CSV.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analytic::{
    amdep_cc, er_jsacc, er_jsacc_high_snr, er_sc, er_sc_high_snr, op_jsacc, op_jsacc_high_snr, op_sc,
    op_sc_high_snr, security_rate, switch_probability,
};
use crate::error::{Error, Result};
use crate::model::{db_to_linear, dbm_to_watts, derive, parse_key_values, ParamsBuilder, SystemParams};
use crate::montecarlo::{run_scenarios, MetricEstimate, MetricId, MIN_TRIALS};
use crate::quadrature::{chebyshev_gauss, gauss_laguerre, QuadratureRule};
use crate::specfun::SeriesControl;

pub const CSV_HEADER: &str = "variable,value,metric,analytic,analytic_asymptote,mc_mean,mc_stderr,n_trials,seed";
pub const DEFAULT_TRIALS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;
/// Order of both quadrature rules.
pub const QUADRATURE_ORDER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    RhoDb,
    PaDbm,
    PjMaxDbm,
    SwitchThreshold,
    NumElements,
    Xi,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::RhoDb => "rho_db",
            SweepVariable::PaDbm => "p_a_dbm",
            SweepVariable::PjMaxDbm => "pj_max_dbm",
            SweepVariable::SwitchThreshold => "switch_threshold",
            SweepVariable::NumElements => "num_elements",
            SweepVariable::Xi => "xi",
        }
    }

    /// `base` with this variable set to `value`.
    pub fn apply(self, base: &SystemParams, value: f64) -> Result<SystemParams> {
        let p = match self {
            SweepVariable::RhoDb => base.with_rho_db(value),
            SweepVariable::PaDbm => base.with_powers(dbm_to_watts(value), base.p_j_max())?,
            SweepVariable::PjMaxDbm => base.with_powers(base.p_a(), dbm_to_watts(value))?,
            SweepVariable::SwitchThreshold => {
                let mut p = base.clone();
                p.switch_threshold = value;
                p
            }
            SweepVariable::NumElements => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(Error::param("num_elements", format!("grid values must be positive integers, got {value}")));
                }
                let mut p = base.clone();
                p.num_elements_n = value as usize;
                p
            }
            SweepVariable::Xi => base.with_xi(value)?,
        };
        p.validate()?;
        Ok(p)
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SweepVariable::RhoDb,
            SweepVariable::PaDbm,
            SweepVariable::PjMaxDbm,
            SweepVariable::SwitchThreshold,
            SweepVariable::NumElements,
            SweepVariable::Xi,
        ]
        .into_iter()
        .find(|v| v.name() == s.trim())
        .ok_or_else(|| Error::Usage(format!("unknown sweep variable `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub metrics: Vec<MetricId>,
    pub trials: u64,
    pub seed: u64,
    pub emit_asymptotes: bool,
    /// Appended to the variable column as `name;label`, to tell apart curves of one CSV.
    pub label: Option<String>,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, grid: Vec<f64>, metrics: Vec<MetricId>) -> Self {
        SweepSpec {
            variable,
            grid,
            metrics,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            emit_asymptotes: false,
            label: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Usage("sweep grid is empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::Usage("sweep grid contains a non-finite value".into()));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Usage("sweep grid must be strictly increasing".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::Usage("no metrics requested".into()));
        }
        if self.trials < MIN_TRIALS {
            return Err(Error::Usage(format!("trials must be at least {MIN_TRIALS}, got {}", self.trials)));
        }
        Ok(())
    }

    fn variable_column(&self) -> String {
        match &self.label {
            Some(l) => format!("{};{l}", self.variable.name()),
            None => self.variable.name().to_string(),
        }
    }
}

/// A sweep file: the model keys plus `sweep.*` keys.
pub fn parse_sweep_config(text: &str) -> Result<(SweepSpec, SystemParams)> {
    let entries = parse_key_values(text)?;
    let mut builder = ParamsBuilder::default();
    let (mut variable, mut grid, mut metrics) = (None, None, None);
    let mut spec_trials = DEFAULT_TRIALS;
    let mut spec_seed = DEFAULT_SEED;
    let mut asymptotes = false;
    for e in &entries {
        let cfg_err = |msg: String| Error::Config { line: e.line, msg };
        match e.key.as_str() {
            "sweep.variable" => variable = Some(e.value.parse::<SweepVariable>().map_err(|err| cfg_err(err.to_string()))?),
            "sweep.grid" => {
                let values = e
                    .value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<f64>().map_err(|_| cfg_err(format!("bad grid value `{}`", s.trim()))))
                    .collect::<Result<Vec<_>>>()?;
                grid = Some(values);
            }
            "sweep.metrics" => {
                let values = e
                    .value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.parse::<MetricId>().map_err(|err| cfg_err(err.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                metrics = Some(values);
            }
            "sweep.trials" => {
                spec_trials = e.value.parse().map_err(|_| cfg_err(format!("bad trial count `{}`", e.value)))?
            }
            "sweep.seed" => spec_seed = e.value.parse().map_err(|_| cfg_err(format!("bad seed `{}`", e.value)))?,
            "sweep.asymptotes" => {
                asymptotes = e.value.parse().map_err(|_| cfg_err(format!("expected true or false, got `{}`", e.value)))?
            }
            key if key.starts_with("sweep.") => return Err(cfg_err(format!("unknown key `{key}`"))),
            key => builder.set(key, &e.value, e.line)?,
        }
    }
    let params = builder.build()?;
    let variable = variable.ok_or_else(|| Error::Config { line: 0, msg: "missing required key `sweep.variable`".into() })?;
    let spec = SweepSpec {
        variable,
        grid: grid.unwrap_or_default(),
        metrics: metrics.ok_or_else(|| Error::Config { line: 0, msg: "missing required key `sweep.metrics`".into() })?,
        trials: spec_trials,
        seed: spec_seed,
        emit_asymptotes: asymptotes,
        label: None,
    };
    spec.validate()?;
    Ok((spec, params))
}

struct Rules {
    gl: QuadratureRule,
    cg: QuadratureRule,
    ctrl: SeriesControl,
}

impl Rules {
    fn new() -> Result<Self> {
        Ok(Rules {
            gl: gauss_laguerre(QUADRATURE_ORDER)?,
            cg: chebyshev_gauss(QUADRATURE_ORDER)?,
            ctrl: SeriesControl::default(),
        })
    }
}

/// Closed form and, when available, its high-SNR counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AnalyticValue {
    pub exact: Option<f64>,
    pub asymptote: Option<f64>,
    /// Only set for `ErJsacc`: the lower high-SNR bound (`asymptote` holds the upper one).
    pub lower_bound: Option<f64>,
}

pub fn analytic_value(metric: MetricId, params: &SystemParams, with_asymptote: bool) -> Result<AnalyticValue> {
    analytic_with(&Rules::new()?, metric, params, with_asymptote)
}

fn analytic_with(rules: &Rules, metric: MetricId, params: &SystemParams, with_asymptote: bool) -> Result<AnalyticValue> {
    let c = derive(params)?;
    let rho = params.rho();
    let (gl, cg, ctrl) = (&rules.gl, &rules.cg, &rules.ctrl);
    let mut v = AnalyticValue::default();
    match metric {
        MetricId::OpJsacc => {
            v.exact = Some(op_jsacc(&c, rho, c.target_rate, cg, ctrl)?.value);
            if with_asymptote && c.m_tilde.is_some() {
                v.asymptote = Some(op_jsacc_high_snr(&c, rho, c.target_rate)?.value);
            }
        }
        MetricId::OpSc => {
            v.exact = Some(op_sc(&c, rho, c.target_rate, gl, ctrl)?.value);
            if with_asymptote {
                v.asymptote = Some(op_sc_high_snr(&c, c.target_rate, gl, ctrl)?.value);
            }
        }
        MetricId::ErJsacc => {
            v.exact = Some(er_jsacc(&c, rho, c.switch_threshold, gl, ctrl)?);
            if with_asymptote {
                let b = er_jsacc_high_snr(&c, rho, c.switch_threshold, gl, ctrl)?;
                v.asymptote = Some(b.upper);
                v.lower_bound = Some(b.lower);
            }
        }
        MetricId::ErSc => {
            v.exact = Some(er_sc(&c, rho, gl, ctrl)?);
            if with_asymptote {
                v.asymptote = Some(er_sc_high_snr(&c, gl, ctrl)?);
            }
        }
        MetricId::ErScClamped => {}
        MetricId::SwitchProb => v.exact = Some(switch_probability(&c, rho, c.switch_threshold, gl, ctrl)?),
        MetricId::Amdep => v.exact = Some(amdep_cc(c.eta1, c.eta2)?),
        MetricId::SecurityRateFixed => {
            let p = op_sc(&c, rho, c.target_rate, gl, ctrl)?.value;
            v.exact = Some(security_rate(&c, p)?);
        }
        MetricId::SecurityRateAdaptive => {
            let p = switch_probability(&c, rho, c.switch_threshold, gl, ctrl)?;
            v.exact = Some(security_rate(&c, p)?);
        }
        MetricId::OutageInclusionViolation => v.exact = Some(0.0),
    }
    Ok(v)
}

/// One emitted CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variable: String,
    pub value: f64,
    pub metric: String,
    pub analytic: Option<f64>,
    pub analytic_asymptote: Option<f64>,
    pub mc: Option<MetricEstimate>,
    pub seed: u64,
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{:e},{},{},{},{},{},{},{}",
            self.variable,
            self.value,
            self.metric,
            num(self.analytic),
            num(self.analytic_asymptote),
            num(self.mc.map(|m| m.mean)),
            num(self.mc.map(|m| m.stderr)),
            self.mc.map(|m| m.n_trials.to_string()).unwrap_or_default(),
            self.seed
        )
    }
}

/// Monte Carlo estimates per grid point, sharing realizations where the channel law allows.
fn monte_carlo(spec: &SweepSpec, points: &[SystemParams]) -> Result<Vec<Vec<MetricEstimate>>> {
    if spec.variable == SweepVariable::NumElements {
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            out.push(run_scenarios(std::slice::from_ref(p), &spec.metrics, spec.trials, spec.seed)?.remove(0));
        }
        Ok(out)
    } else {
        run_scenarios(points, &spec.metrics, spec.trials, spec.seed)
    }
}

/// Evaluates `spec` against `params` and returns the rows in grid order.
pub fn sweep_rows(spec: &SweepSpec, params: &SystemParams) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points: Vec<SystemParams> =
        spec.grid.iter().map(|&v| spec.variable.apply(params, v)).collect::<Result<_>>()?;
    let rules = Rules::new()?;
    let analytic: Vec<Vec<AnalyticValue>> = points
        .par_iter()
        .map(|p| spec.metrics.iter().map(|&m| analytic_with(&rules, m, p, spec.emit_asymptotes)).collect())
        .collect::<Result<_>>()?;
    let mc = monte_carlo(spec, &points)?;

    let variable = spec.variable_column();
    let mut rows = Vec::new();
    for (i, (&value, p)) in spec.grid.iter().zip(&points).enumerate() {
        for (k, &metric) in spec.metrics.iter().enumerate() {
            let a = analytic[i][k];
            let est = mc[i][k];
            rows.push(SweepRow {
                variable: variable.clone(),
                value,
                metric: metric.name().to_string(),
                analytic: a.exact,
                analytic_asymptote: a.asymptote,
                mc: Some(est),
                seed: spec.seed,
            });
            if let Some(lower) = a.lower_bound {
                rows.push(SweepRow {
                    variable: variable.clone(),
                    value,
                    metric: format!("{}_lower_bound", metric.name()),
                    analytic: None,
                    analytic_asymptote: Some(lower),
                    mc: None,
                    seed: spec.seed,
                });
            }
            if metric.is_rate() {
                let b = p.bandwidth_b;
                let scale = |v: Option<f64>| v.map(|x| x * b);
                rows.push(SweepRow {
                    variable: variable.clone(),
                    value,
                    metric: format!("{}_bps", metric.name()),
                    analytic: scale(a.exact),
                    analytic_asymptote: scale(a.asymptote),
                    mc: Some(MetricEstimate { mean: est.mean * b, stderr: est.stderr * b, ..est }),
                    seed: spec.seed,
                });
            }
        }
    }
    Ok(rows)
}

/// Writes the header and every row of every `(spec, params)` pair.
pub fn run_sweeps<W: Write>(runs: &[(SweepSpec, SystemParams)], out: &mut W) -> Result<()> {
    let mut buf = String::new();
    writeln!(buf, "{CSV_HEADER}").expect("write to String");
    for (spec, params) in runs {
        for row in sweep_rows(spec, params)? {
            writeln!(buf, "{}", row.to_csv()).expect("write to String");
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn run_sweep<W: Write>(spec: &SweepSpec, params: &SystemParams, out: &mut W) -> Result<()> {
    run_sweeps(&[(spec.clone(), params.clone())], out)
}

pub const PRESET_NAMES: [&str; 7] =
    ["fig-op-low", "fig-op-high", "fig-er", "fig-er-high", "fig-amdep", "fig-security", "fig-threshold"];

fn range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step).round() as usize;
    (0..=n).map(|k| start + step * k as f64).collect()
}

/// Sweeps behind one figure, with the reference parameters they need.
///
/// Under the reference path loss and unit noise power the outage curves only
/// leave 1 above roughly 50 dB, so the SNR grids extend well past the classic
/// 0–30 dB window.
pub fn preset(name: &str, trials: u64, seed: u64) -> Result<Vec<(SweepSpec, SystemParams)>> {
    let with = |mut spec: SweepSpec, asymptotes: bool| {
        spec.trials = trials;
        spec.seed = seed;
        spec.emit_asymptotes = asymptotes;
        spec
    };
    use MetricId::*;
    use SweepVariable::*;
    let runs = match name {
        "fig-op-low" => {
            let mut grid = vec![0.0, 10.0, 20.0, 30.0, 40.0, 50.0];
            grid.extend(range(52.0, 80.0, 2.0));
            vec![(with(SweepSpec::new(RhoDb, grid, vec![OpJsacc, OpSc]), true), SystemParams::table1(8, 1.0))]
        }
        "fig-op-high" => vec![(
            with(SweepSpec::new(RhoDb, range(60.0, 110.0, 2.5), vec![OpJsacc, OpSc]), true),
            SystemParams::table1(2, 1.0),
        )],
        "fig-er" => {
            let mut grid = vec![0.0, 10.0, 20.0, 30.0, 40.0];
            grid.extend(range(50.0, 80.0, 5.0));
            vec![(with(SweepSpec::new(RhoDb, grid, vec![ErJsacc, ErSc, ErScClamped]), false), SystemParams::table1(16, 1.0))]
        }
        "fig-er-high" => vec![(
            with(SweepSpec::new(RhoDb, range(40.0, 120.0, 5.0), vec![ErJsacc, ErSc]), true),
            SystemParams::table1(8, 1.0),
        )],
        "fig-amdep" => {
            let grid = range(-10.0, 40.0, 5.0);
            let base = SystemParams::table1(16, 1.0);
            let ten = dbm_to_watts(10.0);
            let mut a = with(SweepSpec::new(PaDbm, grid.clone(), vec![Amdep]), false);
            a.label = Some("pj_max_dbm=10".into());
            let mut b = with(SweepSpec::new(PjMaxDbm, grid, vec![Amdep]), false);
            b.label = Some("p_a_dbm=10".into());
            vec![(a, base.with_powers(ten, ten)?), (b, base.with_powers(ten, ten)?)]
        }
        "fig-security" => [0.3, 0.5, 0.7]
            .into_iter()
            .map(|xi| {
                let mut s = with(SweepSpec::new(RhoDb, range(50.0, 80.0, 2.5), vec![SecurityRateFixed, OpSc]), false);
                s.label = Some(format!("xi={xi}"));
                Ok((s, SystemParams::table1(8, 1.0).with_xi(xi)?))
            })
            .collect::<Result<_>>()?,
        "fig-threshold" => {
            let grid = vec![1e5, 5e5, 1e6, 2e6, 3e6, 4e6, 5e6];
            let mut s = with(SweepSpec::new(SwitchThreshold, grid, vec![ErJsacc, SecurityRateAdaptive, SwitchProb]), false);
            s.label = Some("rho_db=100".into());
            vec![(s, SystemParams::table1(8, db_to_linear(100.0)))]
        }
        other => {
            return Err(Error::Usage(format!("unknown preset `{other}`; available: {}", PRESET_NAMES.join(", "))))
        }
    };
    for (spec, _) in &runs {
        spec.validate()?;
    }
    Ok(runs)
}
