//! Fejér and Jackson kernels as Fourier multipliers, binomial series of
//! `(1 - z)^a`, and the kernel-smoothed auxiliary polynomials used by the
//! extremal constructions.
//!
//! Convolution is `(f ∗ g)(θ) = ∫ f(θ - φ) g(φ) dφ`. A kernel of unit mass acts
//! on Fourier coefficients as `c_j -> c_j · m[|j|]` with `m[0] = 1`, so all
//! smoothing here happens in coefficient space.

use std::f64::consts::PI;

use crate::error::{OpucError, Result};
use crate::trig::{ComplexPoly, Grid, TrigSeries, C64};

/// Symmetric Fourier multiplier of a unit-mass kernel, indexed by `|j|`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSeq {
    m: Vec<f64>,
    order: usize,
}

impl MultiplierSeq {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.m
    }

    /// Multiplier for index `j` (zero off the support).
    pub fn get(&self, j: i64) -> f64 {
        self.m.get(j.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    /// Largest `|j|` with a nonzero multiplier.
    pub fn support(&self) -> usize {
        self.m.iter().rposition(|&v| v != 0.0).unwrap_or(0)
    }

    /// Fourier series of the kernel itself, `c_j = m[|j|] / (2π)`.
    pub fn kernel_series(&self) -> TrigSeries {
        let s = self.support();
        TrigSeries::from_fn(s, |j| C64::new(self.get(j) / (2.0 * PI), 0.0))
    }

    /// `s ∗ kernel`.
    pub fn smooth(&self, s: &TrigSeries) -> TrigSeries {
        let band = s.bandwidth().min(self.support());
        TrigSeries::from_fn(band, |j| s.get(j) * self.get(j))
    }

    /// `p ∗ kernel` for a one-sided series (a polynomial or a power series prefix).
    pub fn smooth_one_sided(&self, coeffs: &[f64]) -> ComplexPoly {
        let len = coeffs.len().min(self.support() + 1);
        ComplexPoly::new(
            (0..len)
                .map(|k| C64::new(coeffs[k] * self.m[k], 0.0))
                .collect(),
        )
    }
}

/// Fejér kernel `(2πn)^{-1} (sin(nθ/2)/sin(θ/2))^2`: multipliers `1 - j/n`, `j < n`.
pub fn fejer_multipliers(n: usize) -> Result<MultiplierSeq> {
    if n == 0 {
        return Err(OpucError::InvalidParameter("Fejér order must be >= 1".into()));
    }
    Ok(MultiplierSeq {
        m: (0..n).map(|j| 1.0 - j as f64 / n as f64).collect(),
        order: n,
    })
}

/// Pointwise Fejér kernel value.
pub fn fejer_kernel(n: usize, theta: f64) -> f64 {
    let nf = n as f64;
    let s = (theta / 2.0).sin();
    if s.abs() < 1e-300 {
        return nf / (2.0 * PI);
    }
    let r = (nf * theta / 2.0).sin() / s;
    r * r / (2.0 * PI * nf)
}

/// Jackson kernel `c_n F_n^2` normalized to unit mass.
///
/// The coefficients of `F_n^2` are the discrete self-correlation of the Fejér
/// triangle, so the multipliers are `(t ⋆ t)_j / Σ t_k^2`.
pub fn jackson_multipliers(n: usize) -> Result<MultiplierSeq> {
    let fejer = fejer_multipliers(n)?;
    let t = fejer.values();
    let energy: f64 = t[0] * t[0] + 2.0 * t[1..].iter().map(|v| v * v).sum::<f64>();
    let tri = |k: i64| fejer.get(k);
    let span = 2 * n - 1;
    let m = (0..span as i64)
        .map(|j| {
            let lo = j - (n as i64 - 1);
            let hi = n as i64 - 1;
            (lo..=hi).map(|k| tri(k) * tri(j - k)).sum::<f64>() / energy
        })
        .collect();
    Ok(MultiplierSeq { m, order: n })
}

/// Normalizer `c_n` with `∫ c_n F_n^2 dθ = 1`.
pub fn jackson_constant(n: usize) -> Result<f64> {
    let fejer = fejer_multipliers(n)?;
    let t = fejer.values();
    let energy: f64 = t[0] * t[0] + 2.0 * t[1..].iter().map(|v| v * v).sum::<f64>();
    Ok(2.0 * PI / energy)
}

/// Binomial coefficients of `(1 - z)^a = Σ b_k z^k`, `b_k = (-1)^k binom(a, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FracPowerSeries {
    exponent: f64,
    coeffs: Vec<f64>,
}

const TAIL_LEVELS: usize = 6;

impl FracPowerSeries {
    /// First `len` coefficients by `b_{k+1} = b_k (k - a)/(k + 1)`.
    pub fn new(a: f64, len: usize) -> Result<Self> {
        if !(a > -1.0) {
            return Err(OpucError::DivergentSeries(a));
        }
        Ok(FracPowerSeries {
            exponent: a,
            coeffs: binomial_series(a, len.max(1)),
        })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncated sum at `e^{iθ}` plus a summation-by-parts estimate of the tail,
    /// `Σ_{k≥K} b_k z^k ≈ Σ_m (Δ^m b)_{K+m} z^{K+m} / (1 - z)^{m+1}`.
    /// Accurate away from `θ = 0`, where the series converges only conditionally.
    pub fn eval(&self, theta: f64) -> C64 {
        let z = C64::from_polar(1.0, theta);
        let head: C64 = {
            let mut acc = C64::new(0.0, 0.0);
            for &b in self.coeffs.iter().rev() {
                acc = acc * z + b;
            }
            acc
        };
        let k = self.coeffs.len();
        let one_minus = C64::new(1.0, 0.0) - z;
        if one_minus.norm() < 1e-12 {
            return head;
        }
        // v[i] = b_{K+i}; after m difference passes v[i] = (Δ^m b)_{K+i} for i >= m
        let mut v = Vec::with_capacity(TAIL_LEVELS + 1);
        let mut b = *self.coeffs.last().unwrap();
        for j in (k - 1)..(k + TAIL_LEVELS) {
            b *= (j as f64 - self.exponent) / (j as f64 + 1.0);
            v.push(b);
        }
        let mut tail = C64::new(0.0, 0.0);
        let mut denom = one_minus;
        for m in 0..TAIL_LEVELS {
            tail += C64::from_polar(1.0, (k + m) as f64 * theta) * v[m] / denom;
            denom *= one_minus;
            for i in ((m + 1)..v.len()).rev() {
                v[i] -= v[i - 1];
            }
        }
        head + tail
    }
}

pub fn binomial_series(a: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut b = 1.0;
    for k in 0..len {
        out.push(b);
        b *= (k as f64 - a) / (k as f64 + 1.0);
    }
    out
}

/// Principal-branch `(1 - e^{iθ})^a`.
pub fn frac_power_closed_form(a: f64, theta: f64) -> C64 {
    let w = C64::new(1.0, 0.0) - C64::from_polar(1.0, theta);
    if w.norm() == 0.0 {
        return C64::new(if a == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    (w.ln() * a).exp()
}

/// `frac_power_series(a, K)` under its operational name.
pub fn frac_power_series(a: f64, truncation: usize) -> Result<FracPowerSeries> {
    FracPowerSeries::new(a, truncation)
}

fn check_exponent(name: &str, v: f64, lo: f64, hi: f64, closed_hi: bool) -> Result<()> {
    let ok = v > lo && (v < hi || (closed_hi && v == hi));
    if !ok {
        return Err(OpucError::InvalidParameter(format!(
            "{name} = {v} outside ({lo}, {hi}{}",
            if closed_hi { "]" } else { ")" }
        )));
    }
    Ok(())
}

/// `h_n = 2 (1 - e^{iθ})^ε ∗ F_n`: coefficient `k` is `2 b_k(ε) (1 - k/n)`, degree `n - 1`.
pub fn fejer_power_symbol(eps: f64, n: usize) -> Result<ComplexPoly> {
    check_exponent("eps", eps, 0.0, 1.0, true)?;
    if n < 2 {
        return Err(OpucError::InvalidParameter("n must be >= 2".into()));
    }
    let fejer = fejer_multipliers(n)?;
    let b: Vec<f64> = binomial_series(eps, n).iter().map(|v| 2.0 * v).collect();
    Ok(fejer.smooth_one_sided(&b))
}

/// `H_n = 2 (1 - e^{iθ})^α ∗ K_{⌊n/2⌋}` with the Jackson kernel; degree at most `n - 2`.
pub fn jackson_power_symbol(alpha: f64, n: usize) -> Result<ComplexPoly> {
    check_exponent("alpha", alpha, 0.5, 1.0, false)?;
    if n < 4 {
        return Err(OpucError::InvalidParameter("n must be >= 4".into()));
    }
    let jackson = jackson_multipliers(n / 2)?;
    let b: Vec<f64> = binomial_series(alpha, jackson.support() + 1)
        .iter()
        .map(|v| 2.0 * v)
        .collect();
    Ok(jackson.smooth_one_sided(&b))
}

/// `Q_n = (1 - e^{iθ})^{-α/2} ∗ F_n`: coefficient `k` is `b_k(-α/2) (1 - k/n)`.
pub fn fejer_root_factor(alpha: f64, n: usize) -> Result<ComplexPoly> {
    check_exponent("alpha", alpha, 0.5, 1.0, false)?;
    if n < 2 {
        return Err(OpucError::InvalidParameter("n must be >= 2".into()));
    }
    let fejer = fejer_multipliers(n)?;
    Ok(fejer.smooth_one_sided(&binomial_series(-alpha / 2.0, n)))
}

/// `(Re G) ∗ F_n` for a function known by grid samples; returns the smoothed
/// trigonometric polynomial of degree `n - 1`.
pub fn fejer_smooth_real_part(samples: &[C64], n: usize) -> Result<TrigSeries> {
    let re: Vec<f64> = samples.iter().map(|v| v.re).collect();
    let s = TrigSeries::from_real_samples(&re, n - 1)?;
    Ok(fejer_multipliers(n)?.smooth(&s))
}

/// Grid samples of `2 / p` after asserting `p` stays away from zero.
pub fn reciprocal_on_grid(p: &ComplexPoly, grid: &Grid, numerator: f64) -> Result<Vec<C64>> {
    let v = p.eval_on_grid(grid)?;
    let min = v.iter().map(|x| x.norm()).fold(f64::INFINITY, f64::min);
    if !(min > 1e-10) {
        return Err(OpucError::ConstructionViolated(format!(
            "divisor polynomial nearly vanishes on the circle (min modulus {min:e})"
        )));
    }
    Ok(v.iter().map(|x| numerator / x).collect())
}

pub mod estimates {
    //! Two-sided ratio bands for the auxiliary polynomials. Every band is
    //! reported as the observed `(min, max)` of a ratio over a grid subset.

    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
    pub struct Band {
        pub min: f64,
        pub max: f64,
        pub points: usize,
    }

    impl Band {
        fn collect(values: impl Iterator<Item = f64>) -> Band {
            let mut b = Band {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
                points: 0,
            };
            for v in values {
                b.min = b.min.min(v);
                b.max = b.max.max(v);
                b.points += 1;
            }
            b
        }

        /// Smallest `c >= 1` with the band inside `[1/c, c]`.
        pub fn symmetric_constant(&self) -> f64 {
            if self.min <= 0.0 || !self.min.is_finite() {
                return f64::INFINITY;
            }
            self.max.max(1.0 / self.min).max(1.0)
        }

        pub fn is_positive(&self) -> bool {
            self.points > 0 && self.min > 0.0 && self.max.is_finite()
        }
    }

    fn angles(grid: &Grid) -> Vec<f64> {
        grid.thetas()
    }

    /// `max_θ |arg h_n(θ)|`.
    pub fn max_abs_arg(values: &[C64]) -> f64 {
        values.iter().map(|v| v.arg().abs()).fold(0.0, f64::max)
    }

    /// `Re h_n / (n^{-ε} + |θ|^ε)` over the whole grid.
    pub fn fejer_symbol_real_envelope(eps: f64, n: usize, grid: &Grid) -> Result<Band> {
        let h = fejer_power_symbol(eps, n)?.eval_on_grid(grid)?;
        let floor = (n as f64).powf(-eps);
        Ok(Band::collect(
            h.iter()
                .zip(angles(grid))
                .map(|(v, t)| v.re / (floor + t.abs().powf(eps))),
        ))
    }

    /// `|h_n| / (n^{-ε} + |θ|^ε)` over the whole grid.
    pub fn fejer_symbol_modulus_envelope(eps: f64, n: usize, grid: &Grid) -> Result<Band> {
        let h = fejer_power_symbol(eps, n)?.eval_on_grid(grid)?;
        let floor = (n as f64).powf(-eps);
        Ok(Band::collect(
            h.iter()
                .zip(angles(grid))
                .map(|(v, t)| v.norm() / (floor + t.abs().powf(eps))),
        ))
    }

    /// `max |(Re F ∗ F_n)/Re F - 1|` with `F = 2/h_n`.
    pub fn smoothed_ratio_deviation(eps: f64, n: usize, grid: &Grid) -> Result<f64> {
        let h = fejer_power_symbol(eps, n)?;
        let f = reciprocal_on_grid(&h, grid, 2.0)?;
        let smoothed = fejer_smooth_real_part(&f, n)?.eval_on_grid(grid)?;
        Ok(smoothed
            .iter()
            .zip(&f)
            .map(|(s, fv)| (s.re / fv.re - 1.0).abs())
            .fold(0.0, f64::max))
    }

    /// `max_{|θ| >= δ} |p(θ) - scale·(1 - e^{iθ})^a|`.
    pub fn uniform_deviation(
        p: &ComplexPoly,
        a: f64,
        scale: f64,
        delta: f64,
        grid: &Grid,
    ) -> Result<f64> {
        let v = p.eval_on_grid(grid)?;
        Ok(v.iter()
            .zip(angles(grid))
            .filter(|(_, t)| t.abs() >= delta)
            .map(|(x, t)| (x - frac_power_closed_form(a, t) * scale).norm())
            .fold(0.0, f64::max))
    }

    /// `max_k |Im p(θ_k) + Im p(-θ_k)|`.
    pub fn imaginary_oddness_defect(p: &ComplexPoly, grid: &Grid) -> Result<f64> {
        let v = p.eval_on_grid(grid)?;
        let n = grid.len();
        // θ_k and θ_{N-k} are negatives of each other; θ_0 = -π ≡ π is its own mirror.
        Ok((0..n)
            .map(|k| {
                let mirror = (n - k) % n;
                (v[k].im + v[mirror].im).abs()
            })
            .fold(0.0, f64::max))
    }

    #[derive(Clone, Debug, PartialEq, serde::Serialize)]
    pub struct JacksonBands {
        /// `Re H_n / (τ (n^{-α} + |θ|^α))` on `|θ| < τ²`.
        pub real_part_center: Band,
        /// `|H_n| / |θ|^α` on `|θ| > 1/n`.
        pub modulus_outer: Band,
        /// `|H_n| / (n^τ |θ| + τ n^{-α})` on `|θ| < 1/n`.
        pub modulus_inner: Band,
        /// `max |arg H_n|`.
        pub max_abs_arg: f64,
        /// `(π/2 - max|arg H_n|) / τ`.
        pub arg_margin_constant: f64,
    }

    pub fn jackson_symbol_bands(alpha: f64, n: usize, grid: &Grid) -> Result<JacksonBands> {
        let tau = 1.0 - alpha;
        let nf = n as f64;
        let h = jackson_power_symbol(alpha, n)?.eval_on_grid(grid)?;
        let th = angles(grid);
        let real_part_center = Band::collect(
            h.iter()
                .zip(&th)
                .filter(|(_, t)| t.abs() < tau * tau)
                .map(|(v, t)| v.re / (tau * (nf.powf(-alpha) + t.abs().powf(alpha)))),
        );
        let modulus_outer = Band::collect(
            h.iter()
                .zip(&th)
                .filter(|(_, t)| t.abs() > 1.0 / nf)
                .map(|(v, t)| v.norm() / t.abs().powf(alpha)),
        );
        let modulus_inner = Band::collect(
            h.iter()
                .zip(&th)
                .filter(|(_, t)| t.abs() < 1.0 / nf)
                .map(|(v, t)| v.norm() / (nf.powf(tau) * t.abs() + tau * nf.powf(-alpha))),
        );
        let max_abs_arg = max_abs_arg(&h);
        Ok(JacksonBands {
            real_part_center,
            modulus_outer,
            modulus_inner,
            max_abs_arg,
            arg_margin_constant: (PI / 2.0 - max_abs_arg) / tau,
        })
    }

    #[derive(Clone, Debug, PartialEq, serde::Serialize)]
    pub struct RootFactorBands {
        /// `Re Q_n(0) / n^{α/2}`.
        pub center_ratio: f64,
        /// `Re Q_n · |θ|^{α/2}` on `1/n < |θ| < π`.
        pub outer_real: Band,
        /// `|Q_n| · |θ|^{α/2}` on `1/n < |θ| < π`.
        pub outer_modulus: Band,
        /// `min Re Q_n` over the grid.
        pub min_real: f64,
    }

    pub fn root_factor_bands(alpha: f64, n: usize, grid: &Grid) -> Result<RootFactorBands> {
        let nf = n as f64;
        let q = fejer_root_factor(alpha, n)?;
        let v = q.eval_on_grid(grid)?;
        let th = angles(grid);
        let center = v[grid.zero_index()].re / nf.powf(alpha / 2.0);
        let outer = || {
            v.iter()
                .zip(&th)
                .filter(|(_, t)| t.abs() > 1.0 / nf && t.abs() < PI)
        };
        Ok(RootFactorBands {
            center_ratio: center,
            outer_real: Band::collect(outer().map(|(x, t)| x.re * t.abs().powf(alpha / 2.0))),
            outer_modulus: Band::collect(
                outer().map(|(x, t)| x.norm() * t.abs().powf(alpha / 2.0)),
            ),
            min_real: v.iter().map(|x| x.re).fold(f64::INFINITY, f64::min),
        })
    }
}
