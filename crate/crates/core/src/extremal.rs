//! Explicit weights whose orthonormal polynomials grow at `z = 1`.
//!
//! Both regimes build `φ*_{2n} = c (q + q* + q·h)` from an auxiliary symbol
//! `h` and a zero-free factor `q`, then read off the orthogonality weight
//!
//! ```text
//! σ' = 2 Re F̃ / (π |φ + φ* + F̃(φ* - φ)|^2),   F̃ = 2 / h,
//! ```
//!
//! whose first `2n` recursion coefficients are those of `dθ / (2π|φ*|^2)`
//! and whose tail is that of `Re F̃ dθ / (2π)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::kernels::{
    estimates::Band, fejer_power_symbol, fejer_root_factor, fejer_smooth_real_part,
    jackson_power_symbol, reciprocal_on_grid,
};
use crate::opuc::{self, MeasureSpec};
use crate::roots;
use crate::trig::{sup_norm, ComplexPoly, Grid, TrigSeries, C64, ONE, ZERO};

/// Default scale `s` in the large-regime interval half-width `s·τ^{2/α}`.
pub const DEFAULT_INTERVAL_SCALE: f64 = 0.1;

/// Verblunsky tail coefficients compared in the splice check.
pub const SPLICE_TAIL: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SmallDeviation,
    LargeDeviation,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::SmallDeviation => "small-deviation",
            Regime::LargeDeviation => "large-deviation",
        }
    }
}

/// Grid for a construction of half-degree `n`: `max(4096, 64·2n)` points.
pub fn construction_grid(n: usize) -> Grid {
    Grid::oversampled(2 * n, 64)
}

/// `I_ε` half-width `ε^{2/ε}`, so that `|θ|^ε < ε^2` inside.
pub fn small_interval_half_width(eps: f64) -> f64 {
    eps.powf(2.0 / eps)
}

/// `I_τ` half-width `s·τ^{2/α}` with `τ = 1 - α`.
pub fn large_interval_half_width(alpha: f64, scale: f64) -> f64 {
    scale * (1.0 - alpha).powf(2.0 / alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviationStats {
    pub min: f64,
    pub max: f64,
    pub interval_min: f64,
    pub interval_max: f64,
}

impl DeviationStats {
    fn of(values: &[f64], thetas: &[f64], half_width: f64) -> Self {
        let mut s = DeviationStats {
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            interval_min: f64::INFINITY,
            interval_max: f64::NEG_INFINITY,
        };
        for (v, t) in values.iter().zip(thetas) {
            s.min = s.min.min(*v);
            s.max = s.max.max(*v);
            if t.abs() <= half_width {
                s.interval_min = s.interval_min.min(*v);
                s.interval_max = s.interval_max.max(*v);
            }
        }
        s
    }
}

/// Outcome of comparing the weight's recursion coefficients with the spliced
/// sequence `γ(μ_{2n}), γ̃`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpliceReport {
    pub degree: usize,
    /// `∫ σ' dθ` (one for a probability measure).
    pub mass: f64,
    /// Coefficient distance between `φ_{2n}(σ)` and the constructed `φ_{2n}`.
    pub poly_residual: f64,
    /// `max_{j<2n} |γ_j(σ) - γ_j(μ_{2n})|`.
    pub head_residual: f64,
    /// `|γ_{2n+m}(σ) - γ̃_m|` for `m < SPLICE_TAIL`.
    pub tail_residuals: Vec<f64>,
    pub tail_reference: Vec<f64>,
}

impl SpliceReport {
    pub fn max_tail(&self) -> f64 {
        self.tail_residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Combined consistency figure: polynomial and head agreement.
    pub fn consistency(&self) -> f64 {
        self.poly_residual.max(self.head_residual)
    }
}

/// One extremal construction with its diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub regime: Regime,
    /// `ε` (small regime) or `α` (large regime).
    pub param: f64,
    /// `τ = 1 - α` in the large regime.
    pub tau: Option<f64>,
    pub n: usize,
    pub degree: usize,
    pub grid_points: usize,
    /// `α_n` or `β_n`.
    pub normalization: f64,
    /// `π α_n^2 / 2` (resp. `π β_n^2 / 2`).
    pub upsilon: f64,
    /// `|∫ |φ*|^{-2} dθ - 2π|` on the doubled grid.
    pub normalization_residual: f64,
    pub value_at_one: f64,
    pub sup_norm: f64,
    pub interval_half_width: f64,
    /// Factor bringing `σ'` to total mass `2π` before clipping.
    pub mass_factor: f64,
    pub weight_stats: DeviationStats,
    pub clipped_stats: DeviationStats,
    /// `max w₁ / min w₁`.
    pub achieved_t: f64,
    /// Largest relative gap between the direct weight formula and its factorization.
    pub factorization_defect: f64,
    /// `max ||ξ| - 1|` for `ξ = q*/q`.
    pub xi_modulus_defect: f64,
    pub zeros_in_closed_disk: usize,
    pub min_modulus_on_circle: f64,
    /// `max_I |σ'/ω - 1|` with `ω` the interval mean of `σ'`.
    pub central_deviation: f64,
    /// `Im q(1)` (resp. `Im Q(1)`), zero in exact arithmetic.
    pub factor_at_one_imag: f64,
    /// `(υ σ')` over the central interval, i.e. the reciprocal of the factor product.
    pub central_band: Band,
    /// Smallest value of `𝒟` (large) or `ℬ𝒞` (small) on the central interval.
    pub central_factor_min: f64,
    pub splice: Option<SpliceReport>,
    #[serde(skip)]
    pub grid: Grid,
    #[serde(skip)]
    pub weight: MeasureSpec,
    #[serde(skip)]
    pub clipped: MeasureSpec,
    #[serde(skip)]
    pub phi: ComplexPoly,
    #[serde(skip)]
    pub phi_star: ComplexPoly,
    #[serde(skip)]
    pub f_tilde: Vec<C64>,
}

impl ConstructionReport {
    pub fn consistency(&self) -> Option<f64> {
        self.splice.as_ref().map(SpliceReport::consistency)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstructionOptions {
    pub grid: Option<Grid>,
    pub interval_scale: f64,
    pub splice_check: bool,
}

impl Default for ConstructionOptions {
    fn default() -> Self {
        ConstructionOptions {
            grid: None,
            interval_scale: DEFAULT_INTERVAL_SCALE,
            splice_check: true,
        }
    }
}

fn cepstral_factor(t: &[f64], grid: &Grid, n: usize) -> Result<ComplexPoly> {
    let log_t: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let l = TrigSeries::from_real_samples(&log_t, grid.len() / 2 - 1)?;
    let g = l.map_indexed(|j, c| match j {
        0 => c * 0.5,
        j if j > 0 => c,
        _ => ZERO,
    });
    let q_vals: Vec<C64> = g.eval_on_grid(grid)?.into_iter().map(|v| v.exp()).collect();
    let q = TrigSeries::from_samples(&q_vals, n - 1)?;
    Ok(ComplexPoly::new((0..n as i64).map(|j| q.get(j)).collect()))
}

fn root_reflection_factor(t: &TrigSeries, values: &[f64], grid: &Grid) -> Result<ComplexPoly> {
    let d = t.effective_bandwidth();
    if d == 0 {
        return Ok(ComplexPoly::new(vec![C64::new(t.mean().re.sqrt(), 0.0)]));
    }
    let laurent = ComplexPoly::new((-(d as i64)..=d as i64).map(|j| t.get(j)).collect());
    let mut outside: Vec<C64> = roots::companion_roots(&laurent)?
        .into_iter()
        .filter(|r| r.norm() > 1.0)
        .collect();
    outside.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
    outside.truncate(d);
    let monic = outside
        .iter()
        .fold(ComplexPoly::one(), |acc, &r| acc.mul(&ComplexPoly::new(vec![-r, ONE])));
    let vals = monic.eval_on_grid(grid)?;
    let scale = (values
        .iter()
        .zip(&vals)
        .map(|(t, v)| t / v.norm_sqr())
        .sum::<f64>()
        / values.len() as f64)
        .sqrt();
    let at_zero = monic.coeff(0);
    let phase = if at_zero.norm() > 0.0 {
        at_zero.conj() / at_zero.norm()
    } else {
        ONE
    };
    Ok(monic.scale(phase * scale))
}

fn factor_residual(q: &ComplexPoly, t: &[f64], grid: &Grid) -> Result<f64> {
    let vals = q.eval_on_grid(grid)?;
    Ok(vals
        .iter()
        .zip(t)
        .map(|(v, t)| (v.norm_sqr() - t).abs())
        .fold(0.0, f64::max))
}

fn zero_free_in_closed_disk(q: &ComplexPoly) -> Result<bool> {
    let d = q.degree().finite().unwrap_or(0);
    if d == 0 {
        return Ok(true);
    }
    if d <= roots::COMPANION_MAX_DEGREE {
        let (lo, _) = roots::root_modulus_range(q)?;
        Ok(lo >= 1.0 + 1e-9)
    } else {
        Ok(roots::winding_count(q)? == 0)
    }
}

/// Fejér–Riesz factor: `q` of degree `< n`, zero-free in the closed disk,
/// `q(0) > 0`, with `|q|^2 = t` on the circle.
pub fn fejer_riesz(t: &TrigSeries, n: usize) -> Result<ComplexPoly> {
    if n == 0 {
        return Err(OpucError::InvalidParameter("n must be positive".into()));
    }
    if t.effective_bandwidth() + 1 > n {
        return Err(OpucError::InvalidParameter(format!(
            "series of degree {} does not fit a factor of degree < {n}",
            t.effective_bandwidth()
        )));
    }
    let scale = t.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !t.is_real(1e-12 * scale.max(1e-300)) {
        return Err(OpucError::InvalidParameter("series is not real-valued".into()));
    }
    let grid = Grid::oversampled(n, 64);
    let values: Vec<f64> = t.eval_on_grid(&grid)?.iter().map(|v| v.re).collect();
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(min > 1e-10 * max) {
        return Err(OpucError::NotPositive { min, max });
    }
    let tol = 1e-9 * max;
    let accept = |q: &ComplexPoly| -> Result<Option<f64>> {
        let r = factor_residual(q, &values, &grid)?;
        Ok((r < tol && zero_free_in_closed_disk(q)?).then_some(r))
    };
    let q = cepstral_factor(&values, &grid, n)?;
    if accept(&q)?.is_some() {
        return Ok(q);
    }
    let q = root_reflection_factor(t, &values, &grid)?;
    match accept(&q)? {
        Some(_) => Ok(q),
        None => Err(OpucError::FactorizationFailed(factor_residual(&q, &values, &grid)? / max)),
    }
}

/// `σ'` from `φ*`, `φ` and `F̃` on the grid.
pub fn weight_from_polynomial(phi: &[C64], phi_star: &[C64], f_tilde: &[C64]) -> Vec<f64> {
    phi.iter()
        .zip(phi_star)
        .zip(f_tilde)
        .map(|((p, ps), f)| 2.0 * f.re / (PI * (p + ps + f * (ps - p)).norm_sqr()))
        .collect()
}

/// Sets `w₁ = 1` off `[-half_width, half_width]` and `σ'/min_I σ'` on it.
pub fn clip_weight(sigma: &MeasureSpec, half_width: f64) -> Result<MeasureSpec> {
    if !(sigma.min() > 0.0) {
        return Err(OpucError::MeasureDegenerate("weight must be positive to clip".into()));
    }
    let thetas = sigma.grid().thetas();
    let (lo, _) = sigma.range_on_arc(half_width);
    if !lo.is_finite() {
        return Err(OpucError::InvalidParameter(format!(
            "interval half-width {half_width} contains no grid point"
        )));
    }
    let w = sigma
        .weight()
        .iter()
        .zip(&thetas)
        .map(|(s, t)| if t.abs() <= half_width { s / lo } else { 1.0 })
        .collect();
    MeasureSpec::new(*sigma.grid(), w, format!("clipped({})", sigma.label()))
}

/// Compares the recursion coefficients of the weight with the spliced sequence.
pub fn decop_splice_check(
    phi: &ComplexPoly,
    f_tilde: &[C64],
    grid: &Grid,
    degree: usize,
) -> Result<SpliceReport> {
    let phi_star = phi.star(degree)?;
    let pv = phi.eval_on_grid(grid)?;
    let psv = phi_star.eval_on_grid(grid)?;
    let min_re = f_tilde.iter().map(|f| f.re).fold(f64::INFINITY, f64::min);
    if !(min_re > 0.0) {
        return Err(OpucError::ConstructionViolated(format!(
            "Re F̃ is not positive (min {min_re:e})"
        )));
    }
    let sigma = MeasureSpec::new(*grid, weight_from_polynomial(&pv, &psv, f_tilde), "sigma")?;
    let mu = MeasureSpec::new(
        *grid,
        psv.iter().map(|v| 1.0 / (2.0 * PI * v.norm_sqr())).collect(),
        "bernstein-szego",
    )?;
    let tilde = MeasureSpec::new(
        *grid,
        f_tilde.iter().map(|f| f.re / (2.0 * PI)).collect(),
        "tilde",
    )?;
    let g_sigma = opuc::verblunsky_from_measure(&sigma, degree + SPLICE_TAIL)?;
    let g_mu = opuc::verblunsky_from_measure(&mu, degree)?;
    let g_tilde = opuc::verblunsky_from_measure(&tilde, SPLICE_TAIL)?;
    let head_residual = (0..degree)
        .map(|j| (g_sigma.gamma()[j] - g_mu.gamma()[j]).norm())
        .fold(0.0, f64::max);
    let tail_residuals = (0..SPLICE_TAIL)
        .map(|m| (g_sigma.gamma()[degree + m] - g_tilde.gamma()[m]).norm())
        .collect();
    let recomputed = opuc::orthonormal(&sigma, degree)?.phi;
    Ok(SpliceReport {
        degree,
        mass: sigma.total_mass(),
        poly_residual: recomputed.max_coeff_diff(phi),
        head_residual,
        tail_residuals,
        tail_reference: g_tilde.gamma().iter().map(|g| g.norm()).collect(),
    })
}

fn validate_n(n: usize, min: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(OpucError::InvalidParameter(format!(
            "n = {n} is odd; only even n is constructed"
        )));
    }
    if n < min {
        return Err(OpucError::InvalidParameter(format!("n = {n} is below {min}")));
    }
    Ok(())
}

/// `(σ'^{-1}/υ, central factor)` from the values of `h`, `F̃`, `q` and `ξ` at one point.
type Factorization = fn(C64, C64, C64, C64) -> (f64, f64);

struct Ingredients {
    regime: Regime,
    param: f64,
    tau: Option<f64>,
    n: usize,
    factor: ComplexPoly,
    symbol: ComplexPoly,
    half_width: f64,
    factorization: Factorization,
}

/// Largest grid the adaptive refinement may reach.
const MAX_GRID_LOG2: u32 = 23;

fn mean_inverse_square(p: &ComplexPoly, grid: &Grid) -> Result<f64> {
    let v = p.eval_on_grid(grid)?;
    Ok(v.iter().map(|x| 1.0 / x.norm_sqr()).sum::<f64>() / v.len() as f64)
}

/// Doubles the grid until the mean of `|p|^{-2}` is stable to `1e-12` relative.
fn resolving_grid(p: &ComplexPoly, start: Grid) -> Result<Grid> {
    let mut grid = start;
    let mut current = mean_inverse_square(p, &grid)?;
    while grid.len() < 1 << MAX_GRID_LOG2 {
        let fine = grid.refined();
        let next = mean_inverse_square(p, &fine)?;
        let converged = (next - current).abs() <= 1e-12 * next;
        grid = fine;
        current = next;
        if converged {
            break;
        }
    }
    Ok(grid)
}

fn assemble(ing: Ingredients, opts: &ConstructionOptions) -> Result<ConstructionReport> {
    let Ingredients {
        regime,
        param,
        tau,
        n,
        factor,
        symbol,
        half_width,
        factorization,
    } = ing;
    let degree = 2 * n;
    let q_star = factor.star(degree)?;
    let p = factor.add(&q_star).add(&factor.mul(&symbol));
    let grid = match opts.grid {
        Some(g) => g,
        None => resolving_grid(&p, construction_grid(n))?,
    };
    let pv = p.eval_on_grid(&grid)?;
    let normalization = (pv.iter().map(|v| 1.0 / v.norm_sqr()).sum::<f64>() / pv.len() as f64).sqrt();
    let phi_star = p.scale(C64::new(normalization, 0.0));
    let phi = phi_star.star(degree)?;
    if phi.degree().finite() != Some(degree) {
        return Err(OpucError::ConstructionViolated(format!(
            "φ has degree {:?}, expected {degree}",
            phi.degree()
        )));
    }
    let fine = grid.refined();
    let psv_fine = phi_star.eval_on_grid(&fine)?;
    let normalization_residual =
        (psv_fine.iter().map(|v| 1.0 / v.norm_sqr()).sum::<f64>() * fine.spacing() - 2.0 * PI).abs();
    let min_modulus_on_circle = psv_fine.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    drop(psv_fine);
    let zeros_in_closed_disk = if min_modulus_on_circle < 1e-12 {
        1
    } else {
        roots::zeros_inside_disk(&phi_star)?
    };
    if zeros_in_closed_disk > 0 {
        return Err(OpucError::ConstructionViolated(format!(
            "φ* has {zeros_in_closed_disk} zeros in the closed disk"
        )));
    }

    let hv = symbol.eval_on_grid(&grid)?;
    let f_tilde = reciprocal_on_grid(&symbol, &grid, 2.0)?;
    let qv = factor.eval_on_grid(&grid)?;
    let qsv = q_star.eval_on_grid(&grid)?;
    let phi_vals = phi.eval_on_grid(&grid)?;
    let phi_star_vals: Vec<C64> = pv.iter().map(|v| v * normalization).collect();
    let sigma_vals = weight_from_polynomial(&phi_vals, &phi_star_vals, &f_tilde);
    let upsilon = PI * normalization * normalization / 2.0;
    let thetas = grid.thetas();
    let mut factorization_defect: f64 = 0.0;
    let mut xi_modulus_defect: f64 = 0.0;
    let mut central_factor_min = f64::INFINITY;
    for k in 0..grid.len() {
        let xi = qsv[k] / qv[k];
        xi_modulus_defect = xi_modulus_defect.max((xi.norm() - 1.0).abs());
        let (inverse, central) = factorization(hv[k], f_tilde[k], qv[k], xi);
        let alt = 1.0 / (upsilon * inverse);
        factorization_defect = factorization_defect.max((alt - sigma_vals[k]).abs() / sigma_vals[k]);
        if thetas[k].abs() <= half_width {
            central_factor_min = central_factor_min.min(central);
        }
    }
    let weight = MeasureSpec::new(grid, sigma_vals, format!("{}-sigma", regime.name()))?;
    let mass_factor = 2.0 * PI / weight.total_mass();
    let clipped = clip_weight(&weight.scaled(mass_factor), half_width)?;
    let weight_stats = DeviationStats::of(weight.weight(), &thetas, half_width);
    let clipped_stats = DeviationStats::of(clipped.weight(), &thetas, half_width);
    let inside: Vec<f64> = thetas
        .iter()
        .zip(weight.weight())
        .filter(|(t, _)| t.abs() <= half_width)
        .map(|(_, s)| *s)
        .collect();
    let omega = inside.iter().sum::<f64>() / inside.len() as f64;
    let central_deviation = inside.iter().map(|s| (s / omega - 1.0).abs()).fold(0.0, f64::max);
    let central_band = Band {
        min: inside.iter().map(|s| upsilon * s).fold(f64::INFINITY, f64::min),
        max: inside.iter().map(|s| upsilon * s).fold(f64::NEG_INFINITY, f64::max),
        points: inside.len(),
    };
    let splice = if opts.splice_check {
        Some(decop_splice_check(&phi, &f_tilde, &grid, degree)?)
    } else {
        None
    };
    Ok(ConstructionReport {
        regime,
        param,
        tau,
        n,
        degree,
        grid_points: grid.len(),
        normalization,
        upsilon,
        normalization_residual,
        value_at_one: phi.eval(ONE).norm(),
        sup_norm: sup_norm(&phi, &grid)?,
        interval_half_width: half_width,
        mass_factor,
        weight_stats,
        clipped_stats,
        achieved_t: clipped.max() / clipped.min(),
        factorization_defect,
        xi_modulus_defect,
        zeros_in_closed_disk,
        min_modulus_on_circle,
        central_deviation,
        factor_at_one_imag: factor.eval(ONE).im,
        central_band,
        central_factor_min,
        splice,
        grid,
        weight,
        clipped,
        phi,
        phi_star,
        f_tilde,
    })
}

fn check_grid(opts: &ConstructionOptions, n: usize) -> Result<()> {
    match opts.grid {
        Some(g) if g.len() < 8 * n => Err(OpucError::InvalidParameter(format!(
            "grid of {} points is too coarse for n = {n} (need at least {})",
            g.len(),
            8 * n
        ))),
        _ => Ok(()),
    }
}

fn small_factorization(h: C64, f: C64, q: C64, xi: C64) -> (f64, f64) {
    let a = q.norm_sqr() / f.re;
    let denom = 2.0 + h.conj() * (1.0 - f);
    let b = denom.norm_sqr();
    let j = (2.0 + h * (1.0 + f)) / denom;
    let c = (xi + j).norm_sqr();
    (a * b * c, b * c)
}

fn large_factorization(h: C64, f: C64, q: C64, xi: C64) -> (f64, f64) {
    let e = q.norm_sqr() / f.re;
    let d = (4.0 + h + xi * (h.conj() + 2.0 * (1.0 - h.conj() / h))).norm_sqr();
    (e * d, d)
}

/// Small-deviation construction: `h = h_n`, `q` the Fejér–Riesz factor of
/// `(Re F̃) ∗ F_n`, `φ*_{2n} = α_n (q + q* + q h)`.
pub fn build_small_deviation(eps: f64, n: usize) -> Result<ConstructionReport> {
    build_small_deviation_with(eps, n, &ConstructionOptions::default())
}

pub fn build_small_deviation_with(
    eps: f64,
    n: usize,
    opts: &ConstructionOptions,
) -> Result<ConstructionReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(OpucError::InvalidParameter(format!("eps = {eps} outside (0, 1]")));
    }
    validate_n(n, 8)?;
    check_grid(opts, n)?;
    let h = fejer_power_symbol(eps, n)?;
    let base = opts.grid.unwrap_or_else(|| construction_grid(n));
    let t = fejer_smooth_real_part(&reciprocal_on_grid(&h, &base, 2.0)?, n)?;
    let q = fejer_riesz(&t, n)?;
    assemble(
        Ingredients {
            regime: Regime::SmallDeviation,
            param: eps,
            tau: None,
            n,
            factor: q,
            symbol: h,
            half_width: small_interval_half_width(eps),
            factorization: small_factorization,
        },
        opts,
    )
}

/// Large-deviation construction: `H = H_n` (Jackson-smoothed), `Q = Q_n`,
/// `φ*_{2n} = β_n (Q + Q* + Q H)`.
pub fn build_large_deviation(alpha: f64, n: usize) -> Result<ConstructionReport> {
    build_large_deviation_with(alpha, n, &ConstructionOptions::default())
}

pub fn build_large_deviation_with(
    alpha: f64,
    n: usize,
    opts: &ConstructionOptions,
) -> Result<ConstructionReport> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(OpucError::InvalidParameter(format!("alpha = {alpha} outside (1/2, 1)")));
    }
    validate_n(n, 16)?;
    check_grid(opts, n)?;
    assemble(
        Ingredients {
            regime: Regime::LargeDeviation,
            param: alpha,
            tau: Some(1.0 - alpha),
            n,
            factor: fejer_root_factor(alpha, n)?,
            symbol: jackson_power_symbol(alpha, n)?,
            half_width: large_interval_half_width(alpha, opts.interval_scale),
            factorization: large_factorization,
        },
        opts,
    )
}

/// Regime-dispatching construction.
pub fn build(regime: Regime, param: f64, n: usize, opts: &ConstructionOptions) -> Result<ConstructionReport> {
    match regime {
        Regime::SmallDeviation => build_small_deviation_with(param, n, opts),
        Regime::LargeDeviation => build_large_deviation_with(param, n, opts),
    }
}

/// Arc of the global weight: center, full width and polynomial degree `k` (even).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arc {
    pub center: f64,
    pub width: f64,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArcReport {
    pub center: f64,
    /// Center actually used (snapped to the grid).
    pub grid_center: f64,
    pub width: f64,
    pub degree: usize,
    /// `|φ_k(e^{iθ_c}, w)|` for the assembled weight.
    pub value_global: f64,
    /// `|φ_k(1, w_k)|` for the single-arc clipped weight.
    pub value_single: f64,
    pub transfer_ratio: f64,
    pub interval_half_width: f64,
}

#[derive(Clone, Debug)]
pub struct GlobalWeight {
    pub weight: MeasureSpec,
    pub arcs: Vec<ArcReport>,
    pub max_deviation: f64,
}

fn check_arcs(arcs: &[Arc]) -> Result<()> {
    if arcs.is_empty() {
        return Err(OpucError::InvalidParameter("no arcs given".into()));
    }
    let total: f64 = arcs.iter().map(|a| a.width).sum();
    if arcs.iter().any(|a| !(a.width > 0.0)) || total >= 2.0 * PI {
        return Err(OpucError::OverlappingArcs(format!(
            "widths must be positive with total below 2π (total {total})"
        )));
    }
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            let d = (a.center - b.center).rem_euclid(2.0 * PI);
            let gap = d.min(2.0 * PI - d);
            if gap < (a.width + b.width) / 2.0 {
                return Err(OpucError::OverlappingArcs(format!(
                    "arcs at {} and {} overlap",
                    a.center, b.center
                )));
            }
        }
    }
    Ok(())
}

/// Weight equal to one off the arcs and to rotated clipped constructions on
/// them; each arc's construction has degree `k = 2n`.
pub fn assemble_global_weight(
    regime: Regime,
    param: f64,
    arcs: &[Arc],
    opts: &ConstructionOptions,
) -> Result<GlobalWeight> {
    check_arcs(arcs)?;
    let max_n = arcs.iter().map(|a| a.degree / 2).max().unwrap_or(0);
    let grid = opts.grid.unwrap_or_else(|| construction_grid(max_n));
    let local_opts = ConstructionOptions {
        grid: Some(grid),
        splice_check: false,
        ..*opts
    };
    let n_pts = grid.len() as i64;
    let mut w = vec![1.0; grid.len()];
    let mut pieces = Vec::with_capacity(arcs.len());
    for arc in arcs {
        if arc.degree % 2 == 1 {
            return Err(OpucError::InvalidParameter(format!(
                "arc degree {} is odd",
                arc.degree
            )));
        }
        let c = build(regime, param, arc.degree / 2, &local_opts)?;
        if c.interval_half_width > arc.width / 2.0 {
            return Err(OpucError::InvalidParameter(format!(
                "arc width {} is narrower than the construction interval {}",
                arc.width,
                2.0 * c.interval_half_width
            )));
        }
        let shift = (arc.center / grid.spacing()).round() as i64;
        for (k, v) in c.clipped.weight().iter().enumerate() {
            if *v != 1.0 {
                let target = (k as i64 + shift).rem_euclid(n_pts) as usize;
                w[target] = *v;
            }
        }
        pieces.push((arc, shift, c));
    }
    let weight = MeasureSpec::new(grid, w, format!("{}-arcs", regime.name()))?;
    let mut reports = Vec::with_capacity(pieces.len());
    for (arc, shift, c) in pieces {
        let grid_center = shift as f64 * grid.spacing();
        let z = C64::from_polar(1.0, grid_center);
        let global = opuc::orthonormal(&weight, arc.degree)?.phi.eval(z).norm();
        let single = opuc::orthonormal(&c.clipped, arc.degree)?.phi.eval(ONE).norm();
        reports.push(ArcReport {
            center: arc.center,
            grid_center,
            width: arc.width,
            degree: arc.degree,
            value_global: global,
            value_single: single,
            transfer_ratio: global / single,
            interval_half_width: c.interval_half_width,
        });
    }
    let max_deviation = weight.max() - 1.0;
    Ok(GlobalWeight {
        weight,
        arcs: reports,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fejer_riesz_simple_cases() {
        let t = TrigSeries::new(vec![C64::new(2.0, 0.0), C64::new(5.0, 0.0), C64::new(2.0, 0.0)]).unwrap();
        let q = fejer_riesz(&t, 2).unwrap();
        assert!(q.max_coeff_diff(&ComplexPoly::from_real(&[2.0, 1.0])) < 1e-12);
        let c = fejer_riesz(&TrigSeries::constant(C64::new(3.0, 0.0)), 1).unwrap();
        assert!((c.coeff(0) - C64::new(3f64.sqrt(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fejer_riesz_rejects_nonpositive() {
        let t = TrigSeries::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        assert!(matches!(fejer_riesz(&t, 2), Err(OpucError::NotPositive { .. })));
    }

    #[test]
    fn fallback_agrees_with_cepstrum() {
        let t = TrigSeries::new(vec![
            C64::new(0.5, -0.25),
            C64::new(1.0, 1.0),
            C64::new(6.0, 0.0),
            C64::new(1.0, -1.0),
            C64::new(0.5, 0.25),
        ])
        .unwrap();
        let grid = Grid::oversampled(3, 64);
        let values: Vec<f64> = t.eval_on_grid(&grid).unwrap().iter().map(|v| v.re).collect();
        let a = cepstral_factor(&values, &grid, 3).unwrap();
        let b = root_reflection_factor(&t, &values, &grid).unwrap();
        assert!(a.max_coeff_diff(&b) < 1e-10);
    }

    #[test]
    fn small_regime_invariants() {
        let r = build_small_deviation(0.5, 16).unwrap();
        assert_eq!(r.phi.degree().finite(), Some(32));
        assert!(r.normalization_residual < 1e-8);
        assert!(r.factorization_defect < 1e-8);
        assert!(r.xi_modulus_defect < 1e-10);
        assert!(r.weight_stats.min > 0.0);
        assert!(r.clipped_stats.min >= 1.0);
        let s = r.splice.as_ref().unwrap();
        assert!((s.mass - 1.0).abs() < 1e-8);
        assert!(s.consistency() < 1e-6, "{s:?}");
        assert!(s.max_tail() < 1e-4, "{s:?}");
    }

    #[test]
    fn large_regime_invariants() {
        let r = build_large_deviation(0.8, 32).unwrap();
        assert_eq!(r.phi.degree().finite(), Some(64));
        assert!(r.normalization_residual < 1e-8);
        assert!(r.factorization_defect < 1e-8);
        assert!(r.xi_modulus_defect < 1e-10);
        assert!(r.splice.as_ref().unwrap().consistency() < 1e-6);
        assert_eq!(r.tau, Some(1.0 - 0.8));
    }

    #[test]
    fn odd_and_out_of_range_rejected() {
        assert!(build_small_deviation(0.5, 63).is_err());
        assert!(build_small_deviation(1.5, 64).is_err());
        assert!(build_large_deviation(0.4, 64).is_err());
        assert!(build_large_deviation(0.8, 8).is_err());
    }

    #[test]
    fn clip_of_constant_is_one() {
        let m = MeasureSpec::from_fn(Grid::new(256).unwrap(), |_| 0.3, "c").unwrap();
        let c = clip_weight(&m, 0.5).unwrap();
        assert!(c.weight().iter().all(|&w| w == 1.0));
    }

    #[test]
    fn trivial_splice() {
        let grid = Grid::new(256).unwrap();
        let f = vec![ONE; 256];
        let w = weight_from_polynomial(&[ONE; 256], &[ONE; 256], &f);
        assert!(w.iter().all(|v| (v - 1.0 / (2.0 * PI)).abs() < 1e-15));
        let r = decop_splice_check(&ComplexPoly::one(), &f, &grid, 0).unwrap();
        assert!(r.tail_residuals.iter().all(|v| *v < 1e-14));
    }

    #[test]
    fn single_arc_at_zero_reduces_to_clip() {
        let opts = ConstructionOptions::default();
        let g = assemble_global_weight(
            Regime::SmallDeviation,
            0.5,
            &[Arc { center: 0.0, width: 0.5, degree: 32 }],
            &opts,
        )
        .unwrap();
        let c = build_small_deviation_with(0.5, 16, &ConstructionOptions {
            grid: Some(*g.weight.grid()),
            splice_check: false,
            ..opts
        })
        .unwrap();
        assert_eq!(g.weight.weight(), c.clipped.weight());
        assert!((g.arcs[0].transfer_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlapping_arcs_rejected() {
        let arcs = [
            Arc { center: 0.0, width: 1.0, degree: 16 },
            Arc { center: 0.8, width: 1.0, degree: 16 },
        ];
        assert!(matches!(
            assemble_global_weight(Regime::SmallDeviation, 0.5, &arcs, &ConstructionOptions::default()),
            Err(OpucError::OverlappingArcs(_))
        ));
    }
}
