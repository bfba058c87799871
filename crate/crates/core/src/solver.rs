//! Fourier projections and the fixed-point characterization of monic
//! orthogonal polynomials: `Φ_n = z^n + P_{[0,n-1]}((1 - κw) Φ_n)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::opuc::{self, MeasureSpec};
use crate::trig::{sup_norm, ComplexPoly, TrigSeries, C64, ZERO};

/// Band `[n1, n2]` of Fourier modes kept by a projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionSpec {
    n1: i64,
    n2: i64,
}

impl ProjectionSpec {
    pub fn new(n1: i64, n2: i64) -> Result<Self> {
        if n1 > n2 {
            return Err(OpucError::InvalidParameter(format!(
                "projection band [{n1}, {n2}] is empty"
            )));
        }
        Ok(ProjectionSpec { n1, n2 })
    }

    pub fn n1(&self) -> i64 {
        self.n1
    }

    pub fn n2(&self) -> i64 {
        self.n2
    }

    pub fn contains(&self, j: i64) -> bool {
        self.n1 <= j && j <= self.n2
    }

    fn reach(&self) -> usize {
        self.n1.unsigned_abs().max(self.n2.unsigned_abs()) as usize
    }
}

/// `P_{[n1,n2]} f`: keeps modes in the band and zeroes the rest.
pub fn project(f: &TrigSeries, p: ProjectionSpec) -> TrigSeries {
    f.map_indexed(|j, c| if p.contains(j) { c } else { ZERO })
}

/// Projection of a function known by grid samples.
pub fn project_samples(samples: &[C64], p: ProjectionSpec) -> Result<TrigSeries> {
    Ok(project(&TrigSeries::from_samples(samples, p.reach())?, p))
}

/// `f ↦ P_{[0,n-1]}((1 - κw) f)` for `f` given by grid samples; returns the
/// coefficients of indices `0..n`.
fn defect_operator(samples: &[C64], damp: &[f64], n: usize) -> Result<Vec<C64>> {
    let prod: Vec<C64> = samples.iter().zip(damp).map(|(f, d)| f * d).collect();
    let s = TrigSeries::from_samples(&prod, n)?;
    Ok((0..n as i64).map(|j| s.get(j)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedPointTrace {
    pub kappa: f64,
    /// `max |1 - κw|` over the grid; below one means the map contracts in L².
    pub contraction_bound: f64,
    pub contractive: bool,
    /// Sup-norm coefficient change per iteration.
    pub changes: Vec<f64>,
    /// Geometric mean of successive change ratios over the tail of the trace.
    pub observed_rate: f64,
}

#[derive(Clone, Debug)]
pub struct FixedPointResult {
    pub monic: ComplexPoly,
    pub iterations: usize,
    /// Largest `|(w Φ_n)^_j|`, `0 <= j < n`.
    pub residual: f64,
    pub trace: FixedPointTrace,
}

/// Default `κ = 1 / max w`.
pub fn default_kappa(w: &MeasureSpec) -> f64 {
    1.0 / w.max()
}

/// Iterates `f ← z^n + P_{[0,n-1]}((1 - κw) f)` from `f = z^n` until the
/// coefficient sup-norm change drops below `tol`.
pub fn monic_fixed_point(
    w: &MeasureSpec,
    n: usize,
    kappa: Option<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPointResult> {
    let kappa = kappa.unwrap_or_else(|| default_kappa(w));
    if !(kappa > 0.0) {
        return Err(OpucError::InvalidParameter(format!("kappa = {kappa} must be positive")));
    }
    let grid = *w.grid();
    let damp: Vec<f64> = w.weight().iter().map(|x| 1.0 - kappa * x).collect();
    let contraction_bound = damp.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[n] = C64::new(1.0, 0.0);
    let mut changes = Vec::new();
    let mut converged = false;
    for _ in 0..max_iter {
        let vals = ComplexPoly::new(coeffs.clone()).eval_on_grid(&grid)?;
        let low = defect_operator(&vals, &damp, n)?;
        let change = low
            .iter()
            .zip(&coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        coeffs[..n].copy_from_slice(&low);
        changes.push(change);
        if change < tol {
            converged = true;
            break;
        }
    }
    let trace = FixedPointTrace {
        kappa,
        contraction_bound,
        contractive: kappa * w.max() <= 1.0,
        observed_rate: observed_rate(&changes),
        changes,
    };
    if !converged {
        return Err(OpucError::NonConvergence {
            iterations: max_iter,
            last_change: trace.changes.last().copied().unwrap_or(f64::NAN),
        });
    }
    let monic = ComplexPoly::new(coeffs);
    let residual = projection_residual(w, &monic)?;
    Ok(FixedPointResult {
        iterations: trace.changes.len(),
        monic,
        residual,
        trace,
    })
}

fn observed_rate(changes: &[f64]) -> f64 {
    let usable: Vec<f64> = changes.iter().copied().filter(|c| *c > 1e-14).collect();
    if usable.len() < 3 {
        return 0.0;
    }
    let tail = &usable[usable.len() / 2..];
    if tail.len() < 2 {
        return 0.0;
    }
    (tail[tail.len() - 1] / tail[0]).powf(1.0 / (tail.len() - 1) as f64)
}

/// `max_{0<=j<n} |(w Φ)^_j|`: zero exactly when `Φ` is the monic orthogonal polynomial.
pub fn projection_residual(w: &MeasureSpec, monic: &ComplexPoly) -> Result<f64> {
    let n = monic.degree().finite().unwrap_or(0);
    let vals = monic.eval_on_grid(w.grid())?;
    let weighted: Vec<f64> = w.weight().to_vec();
    let low = defect_operator(&vals, &weighted, n.max(1))?;
    Ok(low.iter().take(n).map(|c| c.norm()).fold(0.0, f64::max))
}

/// Largest L² amplification of `f ↦ P_{[0,n-1]}((1 - κw) f)` over `trials`
/// random unit-norm polynomials of degree `< n`, with the bound `max|1 - κw|`.
pub fn l2_contraction_certificate(
    w: &MeasureSpec,
    n: usize,
    kappa: f64,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let grid = *w.grid();
    let damp: Vec<f64> = w.weight().iter().map(|x| 1.0 - kappa * x).collect();
    let bound = damp.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let c: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let f = ComplexPoly::new(c.iter().map(|v| v / norm).collect());
        let out = defect_operator(&f.eval_on_grid(&grid)?, &damp, n)?;
        worst = worst.max(out.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok((worst, bound))
}

/// Grid `L^p` norm `(∫ |f|^p dθ)^{1/p}`.
pub fn lp_norm(values: &[C64], p: f64) -> f64 {
    let h = 2.0 * std::f64::consts::PI / values.len() as f64;
    (values.iter().map(|v| v.norm().powf(p)).sum::<f64>() * h).powf(1.0 / p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PNormRow {
    pub n: usize,
    pub lp_norm: f64,
    pub sup_norm: f64,
    /// `n^{1/p} ||Φ_n||_p`.
    pub nikolskii_envelope: f64,
    /// `||Φ_n||_∞ / (n^{1/p} ||Φ_n||_p)`.
    pub nikolskii_constant: f64,
}

/// `||Φ_n||_p` for each `n` together with the Nikolskii envelope of the sup norm.
pub fn p_norm_profile(w: &MeasureSpec, n_list: &[usize], p: f64) -> Result<Vec<PNormRow>> {
    n_list
        .iter()
        .map(|&n| {
            let monic = opuc::monic_polynomial(w, n)?;
            let vals = monic.eval_on_grid(w.grid())?;
            let lp = lp_norm(&vals, p);
            let sup = sup_norm(&monic, w.grid())?;
            let env = (n as f64).powf(1.0 / p) * lp;
            Ok(PNormRow {
                n,
                lp_norm: lp,
                sup_norm: sup,
                nikolskii_envelope: env,
                nikolskii_constant: sup / env,
            })
        })
        .collect()
}
