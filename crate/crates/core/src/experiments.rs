//! Desk-scale reproduction suites: growth scans with exponent fits, the
//! lower/upper envelope table, localization checks, kernel estimate suites and
//! Szegő asymptotics.
//!
//! Every suite returns a [`SuiteOutput`]: one CSV table plus a list of checks
//! labelled PASS, FAIL or REPORT. Output is a pure function of the config.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{OpucError, Result};
use crate::extremal::{self, ConstructionOptions, ConstructionReport, Regime};
use crate::kernels::{self, estimates};
use crate::opuc::{self, MeasureSpec};
use crate::solver;
use crate::trig::{sup_norm, Grid, C64};

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------- output

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Report,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Report => "REPORT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub detail: String,
}

impl Check {
    pub fn assert(name: impl Into<String>, ok: bool, value: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            detail: detail.into(),
        }
    }

    pub fn report(name: impl Into<String>, value: f64, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Report,
            value,
            detail: detail.into(),
        }
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e-5, 1e15)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => f.write_str(&format_float(*v)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Status> for Cell {
    fn from(v: Status) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Table {
            schema: schema.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# opuc-lab v{SCHEMA_VERSION} schema={}\n", self.schema);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// `(slope, intercept)` of a fitted line in plot coordinates.
    pub line: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutput {
    pub suite: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub table: Table,
    pub checks: Vec<Check>,
    pub plot: Option<Plot>,
}

#[derive(Serialize)]
struct Summary<'a> {
    schema: String,
    suite: &'a str,
    seed: Option<u64>,
    config: &'a serde_json::Value,
    passed: bool,
    pass: usize,
    fail: usize,
    report: usize,
    checks: &'a [Check],
}

impl SuiteOutput {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn summary_json(&self) -> String {
        let s = Summary {
            schema: format!("opuc-lab v{SCHEMA_VERSION} summary"),
            suite: &self.suite,
            seed: self.seed,
            config: &self.config,
            passed: self.passed(),
            pass: self.count(Status::Pass),
            fail: self.count(Status::Fail),
            report: self.count(Status::Report),
            checks: &self.checks,
        };
        let mut out = serde_json::to_string_pretty(&s).expect("summary serializes");
        out.push('\n');
        out
    }
}

// ---------------------------------------------------------------- fitting

/// Ordinary least squares fit of `log y` against `log x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub std_error: f64,
    /// 95% interval for the slope.
    pub ci_low: f64,
    pub ci_high: f64,
    pub residual_std_error: f64,
    pub points: usize,
}

impl SlopeFit {
    /// The whole 95% interval lies in `[lo, hi]`.
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        self.ci_low >= lo && self.ci_high <= hi
    }

    pub fn describe(&self) -> String {
        format!(
            "slope {} in [{}, {}] (95%), rse {}",
            format_float(self.slope),
            format_float(self.ci_low),
            format_float(self.ci_high),
            format_float(self.residual_std_error)
        )
    }
}

pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() || xs.len() < 4 {
        return Err(OpucError::InvalidParameter(format!(
            "slope fit needs at least 4 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(OpucError::InvalidParameter("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(OpucError::InvalidParameter("slope fit needs distinct abscissae".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = m - 2.0;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let residual_std_error = (sse / dof).sqrt();
    let std_error = residual_std_error / sxx.sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| OpucError::InvalidParameter(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(SlopeFit {
        slope,
        intercept,
        std_error,
        ci_low: slope - t * std_error,
        ci_high: slope + t * std_error,
        residual_std_error,
        points: xs.len(),
    })
}

// ---------------------------------------------------------------- weights

/// Random real trigonometric weight of the given degree, mapped affinely
/// onto `[lo, hi]` over the grid.
pub fn random_trig_weight(seed: u64, lo: f64, hi: f64, degree: usize, grid: Grid) -> Result<MeasureSpec> {
    if !(lo > 0.0 && hi > lo) {
        return Err(OpucError::InvalidParameter(format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(f64, f64)> = (0..degree)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let raw: Vec<f64> = grid
        .thetas()
        .iter()
        .map(|t| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let kt = (k + 1) as f64 * t;
                    a * kt.cos() + b * kt.sin()
                })
                .sum()
        })
        .collect();
    let (mn, mx) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if mx > mn { mx - mn } else { 1.0 };
    MeasureSpec::new(
        grid,
        raw.iter().map(|v| lo + (hi - lo) * (v - mn) / span).collect(),
        format!("trig(seed={seed},[{lo},{hi}])"),
    )
}

// ---------------------------------------------------------------- growth

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanRegime {
    Small,
    Large,
    /// `w ≡ 1/(2π)`, where `φ_{2n} = z^{2n}`.
    Uniform,
}

impl ScanRegime {
    pub fn name(&self) -> &'static str {
        match self {
            ScanRegime::Small => "small",
            ScanRegime::Large => "large",
            ScanRegime::Uniform => "uniform",
        }
    }

    fn regime(&self) -> Option<Regime> {
        match self {
            ScanRegime::Small => Some(Regime::SmallDeviation),
            ScanRegime::Large => Some(Regime::LargeDeviation),
            ScanRegime::Uniform => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GrowthScan {
    pub regime: ScanRegime,
    pub param: f64,
    pub n_values: Vec<usize>,
    /// `|φ_{2n}(1)|`.
    pub value_at_one: Vec<f64>,
    pub sup_norm: Vec<f64>,
    pub fit: SlopeFit,
    pub reports: Vec<ConstructionReport>,
}

impl GrowthScan {
    pub fn label(&self) -> String {
        match self.regime {
            ScanRegime::Small => format!("small(eps={})", format_float(self.param)),
            ScanRegime::Large => format!("large(alpha={})", format_float(self.param)),
            ScanRegime::Uniform => "uniform".to_string(),
        }
    }

    pub fn sup_dominates(&self) -> bool {
        self.sup_norm
            .iter()
            .zip(&self.value_at_one)
            .all(|(s, v)| *s >= v * (1.0 - 1e-12))
    }
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.len() < 4 {
        return Err(OpucError::InvalidParameter("growth scan needs at least 4 values of n".into()));
    }
    if n_list.iter().any(|n| n % 2 != 0) {
        return Err(OpucError::InvalidParameter("growth scan needs even n".into()));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OpucError::InvalidParameter("n values must be strictly increasing".into()));
    }
    Ok(())
}

pub fn run_growth_scan(regime: ScanRegime, param: f64, n_list: &[usize]) -> Result<GrowthScan> {
    check_n_list(n_list)?;
    let (reports, value_at_one, sup): (Vec<ConstructionReport>, Vec<f64>, Vec<f64>) =
        match regime.regime() {
            Some(r) => {
                let reports = n_list
                    .par_iter()
                    .map(|&n| extremal::build(r, param, n, &ConstructionOptions::default()))
                    .collect::<Result<Vec<_>>>()?;
                let v = reports.iter().map(|r| r.value_at_one).collect();
                let s = reports.iter().map(|r| r.sup_norm).collect();
                (reports, v, s)
            }
            None => {
                let rows = n_list
                    .par_iter()
                    .map(|&n| {
                        let grid = Grid::for_degree(2 * n);
                        let m = MeasureSpec::uniform_probability(grid);
                        let phi = opuc::orthonormal(&m, 2 * n)?.phi;
                        Ok((phi.eval(C64::new(1.0, 0.0)).norm(), sup_norm(&phi, &grid)?))
                    })
                    .collect::<Result<Vec<(f64, f64)>>>()?;
                (Vec::new(), rows.iter().map(|r| r.0).collect(), rows.iter().map(|r| r.1).collect())
            }
        };
    let ns: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let fit = fit_loglog(&ns, &value_at_one)?;
    Ok(GrowthScan {
        regime,
        param,
        n_values: n_list.to_vec(),
        value_at_one,
        sup_norm: sup,
        fit,
        reports,
    })
}

/// Monic `Φ_{2n}` of one constructed weight computed three ways.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub n: usize,
    pub degree: usize,
    /// `max w / min w` of the weight handed to the fixed-point solver.
    pub ratio: f64,
    /// Construction formula vs Levinson on the moments of `σ'`.
    pub levinson_residual: f64,
    /// Construction formula vs the fixed-point solver.
    pub fixed_point_residual: f64,
    pub fixed_point_iterations: usize,
}

impl CrossCheck {
    pub fn max_residual(&self) -> f64 {
        self.levinson_residual.max(self.fixed_point_residual)
    }
}

pub fn cross_check(report: &ConstructionReport) -> Result<CrossCheck> {
    let deg = report.degree;
    let lead = report.phi.coeff(deg);
    let constructed = report.phi.scale(C64::new(1.0, 0.0) / lead);
    let levinson = opuc::monic_polynomial(&report.weight, deg)?;
    let w = report.weight.scaled(1.0 / report.weight.min());
    let fp = solver::monic_fixed_point(&w, deg, None, 1e-13, 1_000_000)?;
    Ok(CrossCheck {
        n: report.n,
        degree: deg,
        ratio: w.max() / w.min(),
        levinson_residual: constructed.max_coeff_diff(&levinson),
        fixed_point_residual: constructed.max_coeff_diff(&fp.monic),
        fixed_point_iterations: fp.iterations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub regime: ScanRegime,
    #[serde(default)]
    pub param: f64,
    pub n_list: Vec<usize>,
    /// The slope interval must lie inside this band.
    pub band: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthConfig {
    pub scans: Vec<ScanSpec>,
    /// Constructions with `n` up to this value get the three-way polynomial check.
    pub cross_check_max_n: usize,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            scans: vec![
                ScanSpec {
                    regime: ScanRegime::Small,
                    param: 0.5,
                    n_list: vec![32, 64, 128, 256],
                    band: [0.1, 0.4],
                },
                ScanSpec {
                    regime: ScanRegime::Large,
                    param: 0.8,
                    n_list: vec![64, 128, 256, 512],
                    band: [0.25, 0.55],
                },
                ScanSpec {
                    regime: ScanRegime::Uniform,
                    param: 0.0,
                    n_list: vec![16, 32, 64, 128],
                    band: [-0.01, 0.01],
                },
            ],
            cross_check_max_n: 64,
        }
    }
}

pub fn run_growth_suite(cfg: &GrowthConfig) -> Result<SuiteOutput> {
    let mut table = Table::new(
        "growth",
        &[
            "scan", "n", "degree", "value_at_one", "sup_norm", "grid_points", "clip_max",
            "achieved_t", "consistency",
        ],
    );
    let mut checks = Vec::new();
    let mut plot = Plot {
        title: "growth of |phi_2n(1)|".into(),
        x_label: "n".into(),
        y_label: "|phi_2n(1)|".into(),
        log_x: true,
        log_y: true,
        series: Vec::new(),
    };
    for spec in &cfg.scans {
        let scan = run_growth_scan(spec.regime, spec.param, &spec.n_list)?;
        let label = scan.label();
        for (i, &n) in scan.n_values.iter().enumerate() {
            let r = scan.reports.get(i);
            table.push(vec![
                label.clone().into(),
                n.into(),
                (2 * n).into(),
                scan.value_at_one[i].into(),
                scan.sup_norm[i].into(),
                r.map_or(0, |r| r.grid_points).into(),
                r.map_or(1.0, |r| r.clipped_stats.max).into(),
                r.map_or(1.0, |r| r.achieved_t).into(),
                r.and_then(|r| r.consistency()).unwrap_or(0.0).into(),
            ]);
        }
        let [lo, hi] = spec.band;
        checks.push(Check::assert(
            format!("growth.{label}.slope"),
            scan.fit.within(lo, hi),
            scan.fit.slope,
            format!("{}; band [{}, {}]", scan.fit.describe(), format_float(lo), format_float(hi)),
        ));
        checks.push(Check::assert(
            format!("growth.{label}.sup_dominates"),
            scan.sup_dominates(),
            scan.sup_norm.iter().zip(&scan.value_at_one).map(|(s, v)| s / v).fold(f64::INFINITY, f64::min),
            "min over n of sup_norm / value_at_one",
        ));
        if !scan.reports.is_empty() {
            let worst = scan
                .reports
                .iter()
                .filter_map(|r| r.consistency())
                .fold(0.0, f64::max);
            checks.push(Check::assert(
                format!("growth.{label}.splice_consistency"),
                worst < 1e-6,
                worst,
                "max polynomial/head mismatch against the weight's own recursion",
            ));
            let increasing = scan.value_at_one.windows(2).all(|w| w[1] > w[0]);
            checks.push(Check::assert(
                format!("growth.{label}.monotone"),
                increasing,
                scan.value_at_one[scan.value_at_one.len() - 1] / scan.value_at_one[0],
                "value at one increases with n",
            ));
            for r in &scan.reports {
                let dev = (r.clipped_stats.max - 1.0) / r.param;
                checks.push(Check::report(
                    format!("growth.{label}.n{}.clip_deviation", r.n),
                    dev,
                    format!(
                        "(max w1 - 1) / param; w1 in [{}, {}], T = {}",
                        format_float(r.clipped_stats.min),
                        format_float(r.clipped_stats.max),
                        format_float(r.achieved_t)
                    ),
                ));
            }
            if let Some(tau) = scan.reports[0].tau {
                checks.push(Check::report(
                    format!("growth.{label}.achieved_t"),
                    scan.reports.last().map_or(f64::NAN, |r| r.achieved_t),
                    format!("largest n; compare tau^-4 = {}", format_float(tau.powi(-4))),
                ));
            }
            for r in scan.reports.iter().filter(|r| r.n <= cfg.cross_check_max_n) {
                let c = cross_check(r)?;
                checks.push(Check::assert(
                    format!("growth.{label}.n{}.three_way", r.n),
                    c.max_residual() < 1e-6,
                    c.max_residual(),
                    format!(
                        "levinson {}, fixed point {} after {} iterations (T = {})",
                        format_float(c.levinson_residual),
                        format_float(c.fixed_point_residual),
                        c.fixed_point_iterations,
                        format_float(c.ratio)
                    ),
                ));
            }
        }
        plot.series.push(Series {
            label,
            points: scan.n_values.iter().map(|&n| n as f64).zip(scan.value_at_one.iter().copied()).collect(),
            line: Some((scan.fit.slope, scan.fit.intercept)),
        });
    }
    Ok(SuiteOutput {
        suite: "growth".into(),
        seed: None,
        config: serde_json::to_value(cfg).expect("config serializes"),
        table,
        checks,
        plot: Some(plot),
    })
}

// ---------------------------------------------------------------- envelope

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvelopeConfig {
    pub t_list: Vec<f64>,
    pub small_n_list: Vec<usize>,
    pub large_n_list: Vec<usize>,
    pub p_list: Vec<f64>,
    /// Random trigonometric weights in `[1, t]` added to the upper-bound family.
    pub random_weights: usize,
    pub random_degree: usize,
    pub random_n_list: Vec<usize>,
    /// `τ = tau_scale · t^{-1/4}`, capped below `1/2`.
    pub tau_scale: f64,
    pub tau_cap: f64,
    pub slack: f64,
    pub seed: u64,
}

impl Default for EnvelopeConfig {
    fn default() -> Self {
        EnvelopeConfig {
            t_list: vec![1.1, 1.5, 16.0],
            small_n_list: vec![32, 64, 128, 256],
            large_n_list: vec![64, 128, 256, 512],
            p_list: vec![2.0, 4.0, 8.0, 16.0],
            random_weights: 3,
            random_degree: 5,
            random_n_list: vec![16, 32, 64, 128, 256],
            tau_scale: 0.7,
            tau_cap: 0.45,
            slack: 0.05,
            seed: DEFAULT_SEED,
        }
    }
}

/// The construction matching a deviation bound `t`: `ε = t - 1` below two,
/// `α = 1 - τ(t)` above.
pub fn regime_for_t(t: f64, cfg: &EnvelopeConfig) -> Result<(ScanRegime, f64)> {
    if t > 1.0 && t < 2.0 {
        Ok((ScanRegime::Small, t - 1.0))
    } else if t > 2.0 {
        let tau = (cfg.tau_scale * t.powf(-0.25)).min(cfg.tau_cap);
        Ok((ScanRegime::Large, 1.0 - tau))
    } else {
        Err(OpucError::InvalidParameter(format!("t = {t} must lie in (1, 2) or (2, inf)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub t: f64,
    pub regime: ScanRegime,
    pub param: f64,
    pub lower: SlopeFit,
    /// `min_p (1/p + slope of ||φ||_p)`, maximised over the weight family.
    pub upper: f64,
    pub upper_p: f64,
    pub upper_source: String,
}

fn upper_exponent(ns: &[f64], norms_by_p: &[(f64, Vec<f64>)]) -> Result<(f64, f64)> {
    let mut best = (f64::INFINITY, f64::NAN);
    for (p, norms) in norms_by_p {
        let fit = fit_loglog(ns, norms)?;
        let u = 1.0 / p + fit.ci_high;
        if u < best.0 {
            best = (u, *p);
        }
    }
    Ok(best)
}

fn envelope_row(t: f64, cfg: &EnvelopeConfig) -> Result<EnvelopeRow> {
    let (regime, param) = regime_for_t(t, cfg)?;
    let n_list = match regime {
        ScanRegime::Small => &cfg.small_n_list,
        _ => &cfg.large_n_list,
    };
    let scan = run_growth_scan(regime, param, n_list)?;
    let ns: Vec<f64> = scan.n_values.iter().map(|&n| n as f64).collect();
    let family: Vec<(f64, Vec<f64>)> = cfg
        .p_list
        .iter()
        .map(|&p| {
            let norms = scan
                .reports
                .iter()
                .map(|r| Ok(solver::lp_norm(&r.phi.eval_on_grid(&r.grid)?, p)))
                .collect::<Result<Vec<f64>>>()?;
            Ok((p, norms))
        })
        .collect::<Result<_>>()?;
    let (mut upper, mut upper_p) = upper_exponent(&ns, &family)?;
    let mut upper_source = "construction".to_string();
    let rns: Vec<f64> = cfg.random_n_list.iter().map(|&n| n as f64).collect();
    let grid = Grid::for_degree(*cfg.random_n_list.iter().max().unwrap_or(&16));
    for i in 0..cfg.random_weights {
        let seed = cfg.seed.wrapping_add(i as u64);
        let w = random_trig_weight(seed, 1.0, t, cfg.random_degree, grid)?;
        let norms = cfg
            .p_list
            .iter()
            .map(|&p| {
                let rows = solver::p_norm_profile(&w, &cfg.random_n_list, p)?;
                Ok((p, rows.iter().map(|r| r.lp_norm).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        let (u, p) = upper_exponent(&rns, &norms)?;
        if u > upper {
            upper = u;
            upper_p = p;
            upper_source = format!("random(seed={seed})");
        }
    }
    Ok(EnvelopeRow {
        t,
        regime,
        param,
        lower: scan.fit,
        upper,
        upper_p,
        upper_source,
    })
}

pub fn run_upper_lower_envelope(cfg: &EnvelopeConfig) -> Result<Vec<EnvelopeRow>> {
    cfg.t_list.iter().map(|&t| envelope_row(t, cfg)).collect()
}

pub fn run_envelope_suite(cfg: &EnvelopeConfig) -> Result<SuiteOutput> {
    let rows = run_upper_lower_envelope(cfg)?;
    let mut table = Table::new(
        "envelope",
        &[
            "t", "regime", "param", "lower_slope", "lower_ci_low", "lower_ci_high", "upper",
            "upper_p", "upper_source",
        ],
    );
    let mut checks = Vec::new();
    for r in &rows {
        table.push(vec![
            r.t.into(),
            r.regime.name().into(),
            r.param.into(),
            r.lower.slope.into(),
            r.lower.ci_low.into(),
            r.lower.ci_high.into(),
            r.upper.into(),
            r.upper_p.into(),
            r.upper_source.clone().into(),
        ]);
        let t = format_float(r.t);
        checks.push(Check::assert(
            format!("envelope.t{t}.ordered"),
            r.lower.ci_low <= r.upper + cfg.slack,
            r.upper + cfg.slack - r.lower.ci_low,
            format!("lower {} vs upper {}", r.lower.describe(), format_float(r.upper)),
        ));
        if r.t < 2.0 {
            checks.push(Check::assert(
                format!("envelope.t{t}.positive"),
                r.lower.ci_low > 0.0 && r.upper > 0.0,
                r.lower.ci_low,
                "both envelope estimates positive",
            ));
        } else {
            checks.push(Check::assert(
                format!("envelope.t{t}.below_half"),
                r.lower.ci_high < 0.5,
                r.lower.ci_high,
                "lower slope strictly below 1/2",
            ));
        }
        if r.t < 1.2 {
            checks.push(Check::assert(
                format!("envelope.t{t}.small"),
                r.lower.ci_high < 0.1,
                r.lower.ci_high,
                "near t = 1 the lower slope stays below 0.1",
            ));
        }
    }
    let plot = Plot {
        title: "growth exponent envelopes".into(),
        x_label: "t".into(),
        y_label: "exponent".into(),
        log_x: true,
        log_y: false,
        series: vec![
            Series {
                label: "lower (construction slope)".into(),
                points: rows.iter().map(|r| (r.t, r.lower.slope)).collect(),
                line: None,
            },
            Series {
                label: "upper (Nikolskii bound)".into(),
                points: rows.iter().map(|r| (r.t, r.upper)).collect(),
                line: None,
            },
        ],
    };
    Ok(SuiteOutput {
        suite: "envelope".into(),
        seed: Some(cfg.seed),
        config: serde_json::to_value(cfg).expect("config serializes"),
        table,
        checks,
        plot: Some(plot),
    })
}

// ---------------------------------------------------------------- localization

#[derive(Clone, Debug)]
pub struct LocalizationCase {
    pub label: String,
    pub w1: MeasureSpec,
    pub w2: MeasureSpec,
    pub arc: f64,
}

impl LocalizationCase {
    pub fn swapped(&self) -> LocalizationCase {
        LocalizationCase {
            label: format!("{}:swapped", self.label),
            w1: self.w2.clone(),
            w2: self.w1.clone(),
            arc: self.arc,
        }
    }
}

/// `(w₁, σ'/min_I σ')`: the clipped weight and the rescaled unclipped one,
/// which agree on the central interval.
pub fn construction_case(report: &ConstructionReport) -> Result<LocalizationCase> {
    let scaled = report.weight.scaled(report.mass_factor);
    let (lo, _) = scaled.range_on_arc(report.interval_half_width);
    let w2 = MeasureSpec::new(
        report.grid,
        scaled.weight().iter().map(|s| s / lo).collect(),
        "sigma",
    )?;
    Ok(LocalizationCase {
        label: format!("{}({})/n{}", report.regime.name(), format_float(report.param), report.n),
        w1: report.clipped.clone(),
        w2,
        arc: report.interval_half_width,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationRow {
    pub case: String,
    pub report: opuc::LocalizationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationSuite {
    pub rows: Vec<LocalizationRow>,
    /// Cases whose precondition or computation failed, with the error.
    pub errors: Vec<(String, String)>,
}

pub fn run_localization_suite(cases: &[LocalizationCase], n_list: &[usize]) -> LocalizationSuite {
    let results: Vec<(String, std::result::Result<Vec<opuc::LocalizationReport>, String>)> = cases
        .par_iter()
        .map(|c| {
            let r = n_list
                .iter()
                .map(|&n| opuc::localization_bound(&c.w1, &c.w2, c.arc, n))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.to_string());
            (c.label.clone(), r)
        })
        .collect();
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (label, r) in results {
        match r {
            Ok(reports) => rows.extend(reports.into_iter().map(|report| LocalizationRow {
                case: label.clone(),
                report,
            })),
            Err(e) => errors.push((label, e)),
        }
    }
    LocalizationSuite { rows, errors }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LocalizationConfig {
    pub small_eps: Vec<f64>,
    pub large_alpha: Vec<f64>,
    pub construction_n: usize,
    pub n_list: Vec<usize>,
    pub include_identical: bool,
    pub include_swapped: bool,
}

impl Default for LocalizationConfig {
    fn default() -> Self {
        LocalizationConfig {
            small_eps: vec![0.5, 0.75, 1.0],
            large_alpha: vec![0.7, 0.8, 0.9],
            construction_n: 16,
            n_list: vec![8, 16, 32, 64],
            include_identical: true,
            include_swapped: true,
        }
    }
}

pub fn localization_cases(cfg: &LocalizationConfig) -> Result<Vec<LocalizationCase>> {
    let specs: Vec<(Regime, f64)> = cfg
        .small_eps
        .iter()
        .map(|&e| (Regime::SmallDeviation, e))
        .chain(cfg.large_alpha.iter().map(|&a| (Regime::LargeDeviation, a)))
        .collect();
    let max_n = cfg.n_list.iter().copied().max().unwrap_or(0);
    let base: Vec<LocalizationCase> = specs
        .par_iter()
        .map(|&(r, p)| {
            let min_grid = Grid::for_degree(max_n.max(2 * cfg.construction_n));
            let mut opts = ConstructionOptions {
                splice_check: false,
                ..ConstructionOptions::default()
            };
            let first = extremal::build(r, p, cfg.construction_n, &opts)?;
            let report = if first.grid_points >= min_grid.len() {
                first
            } else {
                opts.grid = Some(min_grid);
                extremal::build(r, p, cfg.construction_n, &opts)?
            };
            construction_case(&report)
        })
        .collect::<Result<_>>()?;
    let mut cases = Vec::new();
    if cfg.include_identical {
        let m = MeasureSpec::uniform_probability(Grid::for_degree(max_n.max(16)));
        cases.push(LocalizationCase {
            label: "identical".into(),
            w1: m.clone(),
            w2: m,
            arc: 0.5,
        });
    }
    for c in base {
        if cfg.include_swapped {
            let s = c.swapped();
            cases.push(c);
            cases.push(s);
        } else {
            cases.push(c);
        }
    }
    Ok(cases)
}

pub fn run_localization(cfg: &LocalizationConfig) -> Result<SuiteOutput> {
    let cases = localization_cases(cfg)?;
    let suite = run_localization_suite(&cases, &cfg.n_list);
    let mut table = Table::new(
        "localization",
        &[
            "case", "n", "arc", "lhs", "rhs", "holds", "lambda_w1", "big_lambda_w1",
            "big_lambda_w2", "outside_integral", "lower_band_constant", "upper_band_constant",
        ],
    );
    for row in &suite.rows {
        let r = &row.report;
        table.push(vec![
            row.case.clone().into(),
            r.n.into(),
            r.eps_arc.into(),
            r.lhs.into(),
            r.rhs.into(),
            (if r.holds { "true" } else { "false" }).into(),
            r.lambda_w1.into(),
            r.big_lambda_w1.into(),
            r.big_lambda_w2.into(),
            r.outside_integral.into(),
            r.lower_band_constant.into(),
            r.upper_band_constant.into(),
        ]);
    }
    let mut checks = Vec::new();
    for c in &cases {
        let rows: Vec<&opuc::LocalizationReport> = suite
            .rows
            .iter()
            .filter(|r| r.case == c.label)
            .map(|r| &r.report)
            .collect();
        if rows.is_empty() {
            continue;
        }
        let margin = rows.iter().map(|r| r.rhs - r.lhs).fold(f64::INFINITY, f64::min);
        checks.push(Check::assert(
            format!("localization.{}.lhs_le_rhs", c.label),
            rows.iter().all(|r| r.holds),
            margin,
            format!("min over n of rhs - lhs ({} values of n)", rows.len()),
        ));
        checks.push(Check::report(
            format!("localization.{}.band_constant", c.label),
            rows.iter().map(|r| r.lower_band_constant).fold(f64::INFINITY, f64::min),
            format!(
                "min lower-band constant; max upper-band constant {}",
                format_float(rows.iter().map(|r| r.upper_band_constant).fold(0.0, f64::max))
            ),
        ));
    }
    for (label, e) in &suite.errors {
        checks.push(Check::assert(format!("localization.{label}.precondition"), false, f64::NAN, e.clone()));
    }
    Ok(SuiteOutput {
        suite: "localization".into(),
        seed: None,
        config: serde_json::to_value(cfg).expect("config serializes"),
        table,
        checks,
        plot: None,
    })
}

// ---------------------------------------------------------------- kernel estimates

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AppendixConfig {
    pub eps_list: Vec<f64>,
    pub alpha_list: Vec<f64>,
    pub n_list: Vec<usize>,
    /// Degrees for the uniform-convergence checks away from `θ = 0`.
    pub convergence_n_list: Vec<usize>,
    pub delta: f64,
    /// Degree for the `Q_n` bands.
    pub root_factor_n: usize,
    pub envelope_ceiling: f64,
    pub ratio_ceiling: f64,
}

impl Default for AppendixConfig {
    fn default() -> Self {
        AppendixConfig {
            eps_list: vec![0.2, 0.35, 0.5],
            alpha_list: vec![0.7, 0.8, 0.9],
            n_list: vec![256, 1024],
            convergence_n_list: vec![128, 256, 512],
            delta: 0.5,
            root_factor_n: 256,
            envelope_ceiling: 25.0,
            ratio_ceiling: 10.0,
        }
    }
}

struct AppendixSink {
    table: Table,
    checks: Vec<Check>,
}

impl AppendixSink {
    fn row(&mut self, quantity: &str, param: f64, n: usize, value: f64, check: Option<(bool, String)>) {
        let name = format!("appendix.{quantity}.p{}.n{n}", format_float(param));
        let (status, bound) = match check {
            Some((ok, bound)) => {
                let c = Check::assert(name, ok, value, bound.clone());
                let s = c.status;
                self.checks.push(c);
                (s, bound)
            }
            None => {
                self.checks.push(Check::report(name, value, ""));
                (Status::Report, String::new())
            }
        };
        self.table.push(vec![
            quantity.into(),
            param.into(),
            n.into(),
            value.into(),
            bound.into(),
            status.into(),
        ]);
    }
}

fn decreasing_by_halves(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0] && w[1] >= w[0] / 6.0)
}

pub fn run_appendix_suites(cfg: &AppendixConfig) -> Result<SuiteOutput> {
    let mut s = AppendixSink {
        table: Table::new("appendix", &["quantity", "param", "n", "value", "bound", "status"]),
        checks: Vec::new(),
    };
    let n_max = cfg.n_list.iter().copied().max().unwrap_or(256);
    let mut arg_points = Vec::new();
    for &eps in &cfg.eps_list {
        for &n in &cfg.n_list {
            let grid = Grid::for_degree(n);
            let env = estimates::fejer_symbol_real_envelope(eps, n, &grid)?;
            let c = env.max.max(1.0 / env.min);
            s.row(
                "re_h_envelope",
                eps,
                n,
                c,
                Some((c < cfg.envelope_ceiling, format!("< {}", format_float(cfg.envelope_ceiling)))),
            );
            let m = estimates::fejer_symbol_modulus_envelope(eps, n, &grid)?;
            s.row("abs_h_envelope", eps, n, m.max.max(1.0 / m.min), None);
            let h = kernels::fejer_power_symbol(eps, n)?;
            let odd = estimates::imaginary_oddness_defect(&h, &grid)?;
            s.row("im_h_oddness", eps, n, odd, Some((odd < 1e-12, "< 1e-12".into())));
            let min_re = h.eval_on_grid(&grid)?.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
            s.row("min_re_h", eps, n, min_re, Some((min_re > 0.0, "> 0".into())));
            if n == n_max {
                let arg = estimates::max_abs_arg(&h.eval_on_grid(&grid)?) / eps;
                arg_points.push((eps, arg * eps));
                s.row("arg_h_over_eps", eps, n, arg, Some(((0.1..=10.0).contains(&arg), "in [0.1, 10]".into())));
                let r = estimates::smoothed_ratio_deviation(eps, n, &grid)? / eps;
                s.row(
                    "smoothed_ratio_over_eps",
                    eps,
                    n,
                    r,
                    Some((r < cfg.ratio_ceiling, format!("< {}", format_float(cfg.ratio_ceiling)))),
                );
            }
        }
    }
    if arg_points.len() >= 3 {
        let fit = fit_loglog(
            &arg_points.iter().map(|p| p.0).collect::<Vec<_>>(),
            &arg_points.iter().map(|p| p.1).collect::<Vec<_>>(),
        );
        if let Ok(fit) = fit {
            s.row(
                "arg_h_eps_exponent",
                f64::NAN,
                n_max,
                fit.slope,
                Some(((0.5..=1.5).contains(&fit.slope), "in [0.5, 1.5]".into())),
            );
        }
    }
    for &eps in &cfg.eps_list {
        let devs = cfg
            .convergence_n_list
            .iter()
            .map(|&n| {
                let h = kernels::fejer_power_symbol(eps, n)?;
                estimates::uniform_deviation(&h, eps, 2.0, cfg.delta, &Grid::for_degree(n))
            })
            .collect::<Result<Vec<f64>>>()?;
        for (i, (&n, d)) in cfg.convergence_n_list.iter().zip(&devs).enumerate() {
            let check = (i > 0).then(|| {
                (decreasing_by_halves(&devs[i - 1..=i]), "ratio to previous in [1/6, 1)".to_string())
            });
            s.row("h_uniform_deviation", eps, n, *d, check);
        }
    }
    for &alpha in &cfg.alpha_list {
        let tau = 1.0 - alpha;
        for &n in &cfg.n_list {
            let grid = Grid::for_degree(n);
            let hh = kernels::jackson_power_symbol(alpha, n)?;
            let odd = estimates::imaginary_oddness_defect(&hh, &grid)?;
            s.row("im_big_h_oddness", alpha, n, odd, Some((odd < 1e-12, "< 1e-12".into())));
            let min_re = hh.eval_on_grid(&grid)?.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
            s.row("min_re_big_h", alpha, n, min_re, Some((min_re > 0.0, "> 0".into())));
            let b = estimates::jackson_symbol_bands(alpha, n, &grid)?;
            s.row(
                "arg_big_h_margin",
                alpha,
                n,
                b.arg_margin_constant,
                Some((b.arg_margin_constant > 0.0, format!("(pi/2 - max|arg H|)/tau > 0, tau = {}", format_float(tau)))),
            );
            s.row("re_big_h_center_min", alpha, n, b.real_part_center.min, None);
            s.row("re_big_h_center_max", alpha, n, b.real_part_center.max, None);
            s.row("abs_big_h_outer_min", alpha, n, b.modulus_outer.min, None);
            s.row("abs_big_h_outer_max", alpha, n, b.modulus_outer.max, None);
            s.row("abs_big_h_inner_min", alpha, n, b.modulus_inner.min, None);
            s.row("abs_big_h_inner_max", alpha, n, b.modulus_inner.max, None);
        }
        let devs = cfg
            .convergence_n_list
            .iter()
            .map(|&n| {
                let hh = kernels::jackson_power_symbol(alpha, n)?;
                estimates::uniform_deviation(&hh, alpha, 2.0, cfg.delta, &Grid::for_degree(n))
            })
            .collect::<Result<Vec<f64>>>()?;
        for (i, (&n, d)) in cfg.convergence_n_list.iter().zip(&devs).enumerate() {
            let check = (i > 0).then(|| (devs[i] < devs[i - 1], "decreasing in n".to_string()));
            s.row("big_h_uniform_deviation", alpha, n, *d, check);
        }
        let n = cfg.root_factor_n;
        let q = estimates::root_factor_bands(alpha, n, &Grid::for_degree(n))?;
        let in_band = |v: f64| (0.1..=10.0).contains(&v);
        s.row("q_center_ratio", alpha, n, q.center_ratio, Some((in_band(q.center_ratio), "in [0.1, 10]".into())));
        s.row("q_outer_real_min", alpha, n, q.outer_real.min, Some((in_band(q.outer_real.min), "in [0.1, 10]".into())));
        s.row("q_outer_real_max", alpha, n, q.outer_real.max, Some((in_band(q.outer_real.max), "in [0.1, 10]".into())));
        s.row("q_min_real", alpha, n, q.min_real, Some((q.min_real > 0.0, "> 0".into())));
    }
    Ok(SuiteOutput {
        suite: "appendix".into(),
        seed: None,
        config: serde_json::to_value(cfg).expect("config serializes"),
        table: s.table,
        checks: s.checks,
        plot: None,
    })
}

// ---------------------------------------------------------------- Szegő asymptotics

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SzegoRow {
    pub n: usize,
    /// `max_θ |φ_n(e^{iθ}) - e^{inθ} conj(Π(e^{iθ}))|`.
    pub residual: f64,
    /// `||φ_n||_∞ / sqrt(n)`.
    pub steklov_ratio: f64,
}

/// Residuals of the Szegő asymptotics for each `n`.
pub fn run_szego_asymptotics(weight: &MeasureSpec, n_list: &[usize]) -> Result<Vec<SzegoRow>> {
    let grid = *weight.grid();
    let outer = opuc::szego_data(weight)?.outer_on_grid(&grid)?;
    let size = grid.len();
    let n_max = n_list.iter().copied().max().unwrap_or(0);
    let sets = opuc::orthonormal_all(weight, n_max)?;
    n_list
        .iter()
        .map(|&n| {
            let phi = &sets[n].phi;
            let vals = phi.eval_on_grid(&grid)?;
            // e^{inθ_k} = (-1)^n e^{2πi (nk mod N)/N}, reduced before scaling
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let residual = vals
                .iter()
                .zip(&outer)
                .enumerate()
                .map(|(k, (v, p))| {
                    let turn = ((n * k) % size) as f64 / size as f64;
                    let phase = C64::from_polar(sign, 2.0 * PI * turn);
                    (v - phase * p.conj()).norm()
                })
                .fold(0.0, f64::max);
            let sup = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
            Ok(SzegoRow {
                n,
                residual,
                steklov_ratio: sup / (n.max(1) as f64).sqrt(),
            })
        })
        .collect()
}

/// `(1 + a cos θ)` normalized to a probability measure.
pub fn cosine_weight(amplitude: f64, grid: Grid) -> Result<MeasureSpec> {
    Ok(MeasureSpec::from_fn(grid, |t| 1.0 + amplitude * t.cos(), format!("1+{amplitude}cos"))?.probability())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SzegoConfig {
    pub n_list: Vec<usize>,
    pub amplitude: f64,
    pub grid_points: usize,
    /// Adds report-only rows for a small-deviation construction with this `n`.
    pub constructed_n: Option<usize>,
    pub constructed_eps: f64,
}

impl Default for SzegoConfig {
    fn default() -> Self {
        SzegoConfig {
            n_list: vec![16, 32, 64, 128],
            amplitude: 0.3,
            grid_points: 4096,
            constructed_n: Some(16),
            constructed_eps: 0.5,
        }
    }
}

pub fn run_szego_suite(cfg: &SzegoConfig) -> Result<SuiteOutput> {
    let grid = Grid::new(cfg.grid_points)?;
    let mut table = Table::new("szego", &["weight", "n", "residual", "steklov_ratio"]);
    let mut checks = Vec::new();
    let push_rows = |table: &mut Table, label: &str, rows: &[SzegoRow]| {
        for r in rows {
            table.push(vec![label.into(), r.n.into(), r.residual.into(), r.steklov_ratio.into()]);
        }
    };

    let uniform = run_szego_asymptotics(&MeasureSpec::uniform_probability(grid), &cfg.n_list)?;
    push_rows(&mut table, "uniform", &uniform);
    let worst = uniform.iter().map(|r| r.residual).fold(0.0, f64::max);
    checks.push(Check::assert("szego.uniform.zero", worst < 1e-12, worst, "phi_n = z^n, Pi = 1"));

    let smooth = run_szego_asymptotics(&cosine_weight(cfg.amplitude, grid)?, &cfg.n_list)?;
    let label = format!("cosine({})", format_float(cfg.amplitude));
    push_rows(&mut table, &label, &smooth);
    for w in smooth.windows(2) {
        checks.push(Check::assert(
            format!("szego.{label}.n{}.monotone_ish", w[1].n),
            w[1].residual < 2.0 * w[0].residual,
            w[1].residual / w[0].residual,
            "residual ratio to previous n below 2",
        ));
    }
    if let (Some(first), Some(last)) = (smooth.first(), smooth.last()) {
        checks.push(Check::assert(
            format!("szego.{label}.decrease"),
            last.residual < first.residual,
            last.residual,
            format!("residual at n = {} vs {} at n = {}", last.n, format_float(first.residual), first.n),
        ));
        checks.push(Check::report(
            format!("szego.{label}.steklov_ratio"),
            last.steklov_ratio,
            format!("sup |phi_n| / sqrt(n) at n = {}", last.n),
        ));
    }

    if let Some(n) = cfg.constructed_n {
        let n_max = cfg.n_list.iter().copied().max().unwrap_or(0);
        let opts = ConstructionOptions {
            grid: Some(Grid::for_degree(n_max.max(2 * n))),
            splice_check: false,
            ..ConstructionOptions::default()
        };
        let r = extremal::build(Regime::SmallDeviation, cfg.constructed_eps, n, &opts)?;
        let rows = run_szego_asymptotics(&r.weight.probability(), &cfg.n_list)?;
        let label = format!("small({})/n{n}", format_float(cfg.constructed_eps));
        push_rows(&mut table, &label, &rows);
        for row in &rows {
            checks.push(Check::report(format!("szego.{label}.n{}", row.n), row.residual, "constructed weight"));
        }
    }
    Ok(SuiteOutput {
        suite: "szego".into(),
        seed: None,
        config: serde_json::to_value(cfg).expect("config serializes"),
        table,
        checks,
        plot: None,
    })
}

// ---------------------------------------------------------------- dispatch

pub const SUITE_NAMES: [&str; 5] = ["growth", "envelope", "localization", "appendix", "szego"];

fn parse<T: for<'de> Deserialize<'de> + Default>(config: Option<&str>) -> Result<T> {
    match config {
        None => Ok(T::default()),
        Some(text) => serde_json::from_str(text).map_err(|e| OpucError::InvalidParameter(format!("config: {e}"))),
    }
}

/// Runs a named suite with a JSON config, or the defaults when `config` is `None`.
pub fn run_named_suite(name: &str, config: Option<&str>) -> Result<SuiteOutput> {
    match name {
        "growth" => run_growth_suite(&parse(config)?),
        "envelope" => run_envelope_suite(&parse(config)?),
        "localization" => run_localization(&parse(config)?),
        "appendix" => run_appendix_suites(&parse(config)?),
        "szego" => run_szego_suite(&parse(config)?),
        other => Err(OpucError::InvalidParameter(format!(
            "unknown suite '{other}', expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_power_law() {
        let xs = [16.0, 32.0, 64.0, 128.0, 256.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.37)).collect();
        let f = fit_loglog(&xs, &ys).unwrap();
        assert!((f.slope - 0.37).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-10);
        assert!(f.residual_std_error < 1e-12);
        assert!(f.within(0.36, 0.38));
    }

    #[test]
    fn fit_interval_matches_textbook_values() {
        // y = x^{0.5} with one perturbed point; the interval uses t(0.975, 2) = 4.302653
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys = [1.0, 2f64.sqrt() * 1.1, 2.0, 8f64.sqrt()];
        let f = fit_loglog(&xs, &ys).unwrap();
        let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let mx = lx.iter().sum::<f64>() / 4.0;
        let my = ly.iter().sum::<f64>() / 4.0;
        let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
        let b = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
        let a = my - b * mx;
        let sse: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - a - b * x).powi(2)).sum();
        let se = (sse / 2.0).sqrt() / sxx.sqrt();
        assert!((f.slope - b).abs() < 1e-14);
        assert!((f.ci_high - (b + 4.302653 * se)).abs() < 1e-5);
        assert!((f.ci_low - (b - 4.302653 * se)).abs() < 1e-5);
    }

    #[test]
    fn fit_rejects_short_or_nonpositive_input() {
        assert!(fit_loglog(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_loglog(&[1.0, 2.0, 3.0, 4.0], &[1.0, 0.0, 3.0, 4.0]).is_err());
        assert!(fit_loglog(&[2.0, 2.0, 2.0, 2.0], &[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [0.0, 1.0, -2.5, 0.1, 1e-20, 6.02e23, 123456.789, 1.0 / 3.0, f64::MIN_POSITIVE] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(1e-20), "1e-20");
    }

    #[test]
    fn csv_has_versioned_header() {
        let mut t = Table::new("demo", &["a", "b"]);
        t.push(vec![1usize.into(), 0.5.into()]);
        assert_eq!(t.to_csv(), "# opuc-lab v1 schema=demo\na,b\n1,0.5\n");
    }

    #[test]
    fn uniform_control_has_zero_slope() {
        let s = run_growth_scan(ScanRegime::Uniform, 0.0, &[8, 16, 32, 64]).unwrap();
        assert!(s.fit.slope.abs() < 1e-10);
        assert!(s.fit.within(-0.01, 0.01));
        assert!(s.value_at_one.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn growth_scan_validates_n_list() {
        assert!(run_growth_scan(ScanRegime::Small, 0.5, &[16, 32, 64]).is_err());
        assert!(run_growth_scan(ScanRegime::Small, 0.5, &[16, 32, 63, 128]).is_err());
        assert!(run_growth_scan(ScanRegime::Small, 0.5, &[32, 16, 64, 128]).is_err());
    }

    #[test]
    fn random_weight_spans_requested_range() {
        let w = random_trig_weight(3, 1.0, 1.5, 5, Grid::new(1024).unwrap()).unwrap();
        assert!((w.min() - 1.0).abs() < 1e-12);
        assert!((w.max() - 1.5).abs() < 1e-12);
        let again = random_trig_weight(3, 1.0, 1.5, 5, Grid::new(1024).unwrap()).unwrap();
        assert_eq!(w.weight(), again.weight());
    }

    #[test]
    fn regime_mapping() {
        let cfg = EnvelopeConfig::default();
        assert_eq!(regime_for_t(1.5, &cfg).unwrap(), (ScanRegime::Small, 0.5));
        let (r, a) = regime_for_t(16.0, &cfg).unwrap();
        assert_eq!(r, ScanRegime::Large);
        assert!((a - 0.65).abs() < 1e-12);
        let (_, a) = regime_for_t(2.5, &cfg).unwrap();
        assert!((a - 0.55).abs() < 1e-12);
        assert!(regime_for_t(2.0, &cfg).is_err());
        assert!(regime_for_t(0.9, &cfg).is_err());
    }

    #[test]
    fn szego_uniform_is_exact() {
        let rows = run_szego_asymptotics(&MeasureSpec::uniform_probability(Grid::new(512).unwrap()), &[1, 4, 16]).unwrap();
        assert!(rows.iter().all(|r| r.residual < 1e-13));
    }

    #[test]
    fn identical_weights_localize_trivially() {
        let m = cosine_weight(0.3, Grid::new(1024).unwrap()).unwrap();
        let c = LocalizationCase {
            label: "same".into(),
            w1: m.clone(),
            w2: m,
            arc: 0.3,
        };
        let s = run_localization_suite(&[c], &[4, 8]);
        assert!(s.errors.is_empty());
        assert!(s.rows.iter().all(|r| r.report.holds && (r.report.lhs - 1.0).abs() < 1e-12));
    }

    #[test]
    fn localization_reports_violated_precondition() {
        let g = Grid::new(512).unwrap();
        let c = LocalizationCase {
            label: "mismatch".into(),
            w1: MeasureSpec::uniform_probability(g),
            w2: cosine_weight(0.3, g).unwrap(),
            arc: 0.3,
        };
        let s = run_localization_suite(&[c], &[4]);
        assert!(s.rows.is_empty());
        assert_eq!(s.errors.len(), 1);
    }

    #[test]
    fn unknown_suite_and_bad_config_are_rejected() {
        assert!(run_named_suite("nope", None).is_err());
        assert!(run_named_suite("szego", Some(r#"{"n_lst": [1]}"#)).is_err());
    }
}
