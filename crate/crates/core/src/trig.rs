//! Polynomial and trigonometric-series arithmetic on the unit circle.
//!
//! Coefficient conventions: a [`ComplexPoly`] stores `coeffs[k]` as the
//! coefficient of `z^k`; a [`TrigSeries`] stores Fourier coefficients
//! `c_j = (2π)^{-1} ∫ f(θ) e^{-ijθ} dθ` for `|j| <= bandwidth`, so that
//! `f = Σ c_j e^{ijθ}`. Grids are uniform with `θ_k = -π + 2πk/N`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{OpucError, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized forward DFT: `X_m = Σ_k x_k e^{-2πimk/N}`.
pub(crate) fn fft_forward(buf: &mut [C64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// In-place unnormalized inverse DFT: `x_k = Σ_m X_m e^{+2πimk/N}`.
pub(crate) fn fft_inverse(buf: &mut [C64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

#[inline]
fn alternating(j: i64) -> f64 {
    if j.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Samples `Σ_j c_j e^{ijθ_k}` on the `N`-point grid from `(index, coefficient)` pairs.
fn synthesize(terms: impl Iterator<Item = (i64, C64)>, n: usize) -> Vec<C64> {
    let mut buf = vec![ZERO; n];
    for (j, c) in terms {
        // e^{ijθ_k} = (-1)^j e^{2πijk/N}
        buf[j.rem_euclid(n as i64) as usize] += c * alternating(j);
    }
    fft_inverse(&mut buf);
    buf
}

/// Trapezoid Fourier coefficients of grid samples, indexed `-band..=band`.
fn analyze(samples: &[C64], band: usize) -> Vec<C64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    fft_forward(&mut buf);
    let scale = 1.0 / n as f64;
    (-(band as i64)..=band as i64)
        .map(|j| buf[j.rem_euclid(n as i64) as usize] * (alternating(j) * scale))
        .collect()
}

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// True when a polynomial of this degree lies in the space of degree at most `n`.
    pub fn fits(self, n: usize) -> bool {
        match self {
            Degree::NegInfinity => true,
            Degree::Finite(d) => d <= n,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Uniform grid on `[-π, π)` with a power-of-two number of points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(OpucError::GridNotPowerOfTwo(n));
        }
        Ok(Grid { n })
    }

    /// Default grid for work at polynomial degree `degree`: `max(4096, 16·degree)`
    /// rounded up to a power of two.
    pub fn for_degree(degree: usize) -> Self {
        Grid {
            n: (16 * degree).max(4096).next_power_of_two(),
        }
    }

    /// Grid with `oversample` points per unit of degree, at least 4096.
    pub fn oversampled(degree: usize, oversample: usize) -> Self {
        Grid {
            n: (oversample * degree).max(4096).next_power_of_two(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn theta(&self, k: usize) -> f64 {
        -PI + 2.0 * PI * k as f64 / self.n as f64
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.theta(k)).collect()
    }

    /// Grid index of `θ = 0`.
    pub fn zero_index(&self) -> usize {
        self.n / 2
    }

    /// Nearest grid index to an angle, after wrapping it into `[-π, π)`.
    pub fn nearest_index(&self, theta: f64) -> usize {
        let wrapped = (theta + PI).rem_euclid(2.0 * PI);
        ((wrapped / self.spacing()).round() as usize) % self.n
    }

    /// Same grid with twice as many points.
    pub fn refined(&self) -> Grid {
        Grid { n: self.n * 2 }
    }

    fn require(&self, bandwidth: usize) -> Result<()> {
        let required = 2 * bandwidth + 2;
        if self.n < required {
            return Err(OpucError::Aliasing {
                points: self.n,
                bandwidth,
                required,
            });
        }
        Ok(())
    }
}

/// Dense polynomial in `z` with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<C64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        ComplexPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(vec![ZERO])
    }

    pub fn one() -> Self {
        Self::new(vec![ONE])
    }

    pub fn monomial(n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = ONE;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Coefficient of `z^k` (zero past the stored length).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.iter().rposition(|c| *c != ZERO) {
            Some(d) => Degree::Finite(d),
            None => Degree::NegInfinity,
        }
    }

    /// Coefficient of the highest nonzero power.
    pub fn leading(&self) -> C64 {
        match self.degree() {
            Degree::Finite(d) => self.coeffs[d],
            Degree::NegInfinity => ZERO,
        }
    }

    /// Horner evaluation at an arbitrary point.
    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// The `(∗)` reversal in the space of degree at most `n`:
    /// `coeff(p*, k) = conj(coeff(p, n - k))`.
    pub fn star(&self, n: usize) -> Result<ComplexPoly> {
        let deg = self.degree();
        if !deg.fits(n) {
            return Err(OpucError::InvalidContext {
                degree: deg.finite().unwrap_or(0),
                context: n,
            });
        }
        Ok(ComplexPoly::new(
            (0..=n).map(|k| self.coeff(n - k).conj()).collect(),
        ))
    }

    /// Exact coefficient convolution.
    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        let (a, b) = (self.trimmed(), other.trimmed());
        let mut out = vec![ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        ComplexPoly::new(out)
    }

    pub fn add(&self, other: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        ComplexPoly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        ComplexPoly::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, s: C64) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiply by `z`.
    pub fn shift_up(&self) -> ComplexPoly {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(ZERO);
        c.extend_from_slice(&self.coeffs);
        ComplexPoly::new(c)
    }

    /// Coefficients up to the degree (at least one entry).
    pub fn trimmed(&self) -> &[C64] {
        match self.degree() {
            Degree::Finite(d) => &self.coeffs[..=d],
            Degree::NegInfinity => &self.coeffs[..1],
        }
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_coeff_diff(&self, other: &ComplexPoly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn l1_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// Values at `e^{iθ_k}` by zero-padded inverse DFT.
    pub fn eval_on_grid(&self, grid: &Grid) -> Result<Vec<C64>> {
        let band = self.degree().finite().unwrap_or(0);
        grid.require(band)?;
        Ok(self.eval_on_grid_unchecked(grid.len()))
    }

    /// Grid values without the aliasing precondition; only requires `N > degree`.
    pub(crate) fn eval_on_grid_unchecked(&self, n: usize) -> Vec<C64> {
        let c = self.trimmed();
        debug_assert!(c.len() <= n);
        synthesize(c.iter().enumerate().map(|(k, &v)| (k as i64, v)), n)
    }

    pub fn to_series(&self) -> TrigSeries {
        let d = self.degree().finite().unwrap_or(0);
        let mut coeffs = vec![ZERO; 2 * d + 1];
        coeffs[d..].copy_from_slice(&self.coeffs[..=d]);
        TrigSeries {
            coeffs,
            bandwidth: d,
        }
    }
}

/// Sup norm over the unit circle estimated from grid maxima, doubling the grid
/// until the maximum changes by less than `1e-6` relative. Always a lower bound.
pub fn sup_norm(p: &ComplexPoly, grid: &Grid) -> Result<f64> {
    let grid_max = |g: &Grid| -> Result<f64> {
        Ok(p.eval_on_grid(g)?.iter().map(|v| v.norm()).fold(0.0, f64::max))
    };
    let mut g = *grid;
    let mut current = grid_max(&g)?;
    for _ in 0..4 {
        g = g.refined();
        let next = grid_max(&g)?;
        let change = (next - current).abs();
        current = current.max(next);
        if change <= 1e-6 * current.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(current)
}

/// Two-sided Fourier coefficient vector with finite bandwidth.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    coeffs: Vec<C64>,
    bandwidth: usize,
}

impl TrigSeries {
    /// Coefficients listed for `j = -bandwidth..=bandwidth`.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(OpucError::InvalidParameter(format!(
                "two-sided coefficient vector must have odd length, got {}",
                coeffs.len()
            )));
        }
        let bandwidth = coeffs.len() / 2;
        Ok(TrigSeries { coeffs, bandwidth })
    }

    pub fn zero(bandwidth: usize) -> Self {
        TrigSeries {
            coeffs: vec![ZERO; 2 * bandwidth + 1],
            bandwidth,
        }
    }

    pub fn constant(c: C64) -> Self {
        TrigSeries {
            coeffs: vec![c],
            bandwidth: 0,
        }
    }

    /// Series built from a closure over `j = -bandwidth..=bandwidth`.
    pub fn from_fn(bandwidth: usize, mut f: impl FnMut(i64) -> C64) -> Self {
        let b = bandwidth as i64;
        TrigSeries {
            coeffs: (-b..=b).map(&mut f).collect(),
            bandwidth,
        }
    }

    /// Trapezoid (DFT) Fourier coefficients of samples on `θ_k = -π + 2πk/N`.
    pub fn from_samples(samples: &[C64], bandwidth: usize) -> Result<Self> {
        let required = 2 * bandwidth + 2;
        if samples.len() < required {
            return Err(OpucError::Aliasing {
                points: samples.len(),
                bandwidth,
                required,
            });
        }
        Ok(TrigSeries {
            coeffs: analyze(samples, bandwidth),
            bandwidth,
        })
    }

    pub fn from_real_samples(samples: &[f64], bandwidth: usize) -> Result<Self> {
        let s: Vec<C64> = samples.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_samples(&s, bandwidth)
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient `c_j`; zero outside the band.
    pub fn get(&self, j: i64) -> C64 {
        let b = self.bandwidth as i64;
        if j.abs() > b {
            ZERO
        } else {
            self.coeffs[(j + b) as usize]
        }
    }

    pub fn mean(&self) -> C64 {
        self.get(0)
    }

    /// `∫_{-π}^{π} f dθ = 2π c_0`.
    pub fn integrate(&self) -> C64 {
        self.mean() * (2.0 * PI)
    }

    /// Largest `|c_{-j} - conj(c_j)|`; zero for a real-valued function.
    pub fn reality_defect(&self) -> f64 {
        (0..=self.bandwidth as i64)
            .map(|j| (self.get(-j) - self.get(j).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect() <= tol
    }

    /// Largest index with a nonzero coefficient (effective bandwidth).
    pub fn effective_bandwidth(&self) -> usize {
        (0..=self.bandwidth as i64)
            .rev()
            .find(|&j| self.get(j) != ZERO || self.get(-j) != ZERO)
            .unwrap_or(0) as usize
    }

    /// Values on the grid; needs `N >= 2·bandwidth + 2`.
    pub fn eval_on_grid(&self, grid: &Grid) -> Result<Vec<C64>> {
        grid.require(self.effective_bandwidth())?;
        let b = self.bandwidth as i64;
        Ok(synthesize(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64 - b, c)),
            grid.len(),
        ))
    }

    /// Direct summation at one angle.
    pub fn eval_at(&self, theta: f64) -> C64 {
        let b = self.bandwidth as i64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| c * C64::from_polar(1.0, (i as i64 - b) as f64 * theta))
            .sum()
    }

    /// Coefficient-wise map `c_j -> f(j, c_j)`.
    pub fn map_indexed(&self, mut f: impl FnMut(i64, C64) -> C64) -> TrigSeries {
        let b = self.bandwidth as i64;
        TrigSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| f(i as i64 - b, c))
                .collect(),
            bandwidth: self.bandwidth,
        }
    }

    /// Nonnegative-index part as a polynomial in `z`.
    pub fn analytic_part(&self) -> ComplexPoly {
        ComplexPoly::new((0..=self.bandwidth as i64).map(|j| self.get(j)).collect())
    }

    /// Series product (coefficient convolution).
    pub fn multiply(&self, other: &TrigSeries) -> TrigSeries {
        let bw = self.bandwidth + other.bandwidth;
        let mut coeffs = vec![ZERO; 2 * bw + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (k, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + k] += a * b;
            }
        }
        TrigSeries {
            coeffs,
            bandwidth: bw,
        }
    }

    /// `Σ |c_j|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> ComplexPoly {
        ComplexPoly::new(
            (0..=deg)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
    }

    #[test]
    fn star_of_linear_in_quadratic_context() {
        let p = ComplexPoly::from_real(&[1.0, 2.0]);
        let s = p.star(2).unwrap();
        assert_eq!(s.coeffs(), &[c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn star_of_monomial_is_one() {
        for n in 0..8 {
            let s = ComplexPoly::monomial(n).star(n).unwrap();
            assert_eq!(s.degree(), Degree::Finite(0));
            assert_eq!(s.coeff(0), ONE);
        }
    }

    #[test]
    fn star_rejects_small_context() {
        let p = ComplexPoly::from_real(&[1.0, 0.0, 3.0]);
        assert!(matches!(
            p.star(1),
            Err(OpucError::InvalidContext { degree: 2, context: 1 })
        ));
        // trailing zeros do not count toward the degree
        let q = ComplexPoly::from_real(&[1.0, 1.0, 0.0, 0.0]);
        assert!(q.star(1).is_ok());
    }

    #[test]
    fn star_preserves_modulus_on_circle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grid = Grid::new(256).unwrap();
        for _ in 0..64 {
            let deg = rng.gen_range(0..=16);
            let p = random_poly(&mut rng, deg);
            let s = p.star(16).unwrap();
            let a = p.eval_on_grid(&grid).unwrap();
            let b = s.eval_on_grid(&grid).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x.norm() - y.norm()).abs() < 1e-12 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn zero_polynomial_has_sentinel_degree() {
        assert_eq!(ComplexPoly::zero().degree(), Degree::NegInfinity);
        assert_eq!(ComplexPoly::new(vec![]).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        let g = Grid::new(8).unwrap();
        assert!(ComplexPoly::zero()
            .eval_on_grid(&g)
            .unwrap()
            .iter()
            .all(|v| *v == ZERO));
    }

    #[test]
    fn z_on_four_point_grid() {
        let g = Grid::new(4).unwrap();
        let v = ComplexPoly::monomial(1).eval_on_grid(&g).unwrap();
        let want = [c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0)];
        for (a, b) in v.iter().zip(&want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn undersized_grid_is_aliasing_error() {
        let g = Grid::new(4).unwrap();
        let p = ComplexPoly::monomial(2);
        assert!(matches!(p.eval_on_grid(&g), Err(OpucError::Aliasing { .. })));
        assert!(matches!(
            TrigSeries::from_samples(&[ONE; 4], 2),
            Err(OpucError::Aliasing { .. })
        ));
        assert!(Grid::new(12).is_err());
    }

    #[test]
    fn grid_eval_matches_horner() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_poly(&mut rng, 100);
        let g = Grid::new(256).unwrap();
        let fast = p.eval_on_grid(&g).unwrap();
        let scale = p.l1_coeff_norm();
        for _ in 0..20 {
            let k = rng.gen_range(0..256);
            let z = C64::from_polar(1.0, g.theta(k));
            assert!((fast[k] - p.eval(z)).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn series_of_constant_and_cosine() {
        let g = Grid::new(32).unwrap();
        let one = TrigSeries::from_real_samples(&vec![1.0; 32], 8).unwrap();
        assert!((one.mean() - ONE).norm() < 1e-15);
        for j in 1..=8 {
            assert!(one.get(j).norm() < 1e-15 && one.get(-j).norm() < 1e-15);
        }
        let cosine: Vec<f64> = g.thetas().iter().map(|t| t.cos()).collect();
        let s = TrigSeries::from_real_samples(&cosine, 8).unwrap();
        assert!((s.get(1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((s.get(-1) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(s.mean().norm() < 1e-15);
    }

    #[test]
    fn product_degree_and_example() {
        let p = ComplexPoly::from_real(&[1.0, 1.0]);
        let q = ComplexPoly::from_real(&[1.0, -1.0]);
        let r = p.mul(&q);
        assert_eq!(r.degree(), Degree::Finite(2));
        assert!(r.max_coeff_diff(&ComplexPoly::from_real(&[1.0, 0.0, -1.0])) < 1e-15);
    }

    #[test]
    fn sup_norm_of_monomials() {
        let g = Grid::new(64).unwrap();
        for n in [0, 1, 5, 20] {
            assert!((sup_norm(&ComplexPoly::monomial(n), &g).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn integrate_is_two_pi_mean() {
        let s = TrigSeries::constant(c(0.25, 0.0));
        assert!((s.integrate().re - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn nearest_index_wraps() {
        let g = Grid::new(16).unwrap();
        assert_eq!(g.nearest_index(0.0), 8);
        assert_eq!(g.nearest_index(PI), 0);
        assert_eq!(g.nearest_index(-PI), 0);
        assert_eq!(g.nearest_index(3.0 * PI), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly_strategy(max_deg: usize) -> impl Strategy<Value = ComplexPoly> {
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_deg + 1)
                .prop_map(|v| ComplexPoly::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
        }

        proptest! {
            #[test]
            fn star_is_an_involution(p in poly_strategy(24), extra in 0usize..5) {
                let n = p.coeffs().len() - 1 + extra;
                let back = p.star(n).unwrap().star(n).unwrap();
                for k in 0..=n {
                    prop_assert_eq!(back.coeff(k), p.coeff(k));
                }
            }

            #[test]
            fn product_bandwidth_adds(p in poly_strategy(12), q in poly_strategy(12)) {
                let (dp, dq) = (p.degree(), q.degree());
                prop_assume!(dp != Degree::NegInfinity && dq != Degree::NegInfinity);
                prop_assert_eq!(
                    p.mul(&q).degree(),
                    Degree::Finite(dp.finite().unwrap() + dq.finite().unwrap())
                );
            }

            #[test]
            fn series_round_trip_and_parseval(
                v in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=33)
            ) {
                let mut coeffs: Vec<C64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
                if coeffs.len() % 2 == 0 { coeffs.pop(); }
                let s = TrigSeries::new(coeffs).unwrap();
                let g = Grid::new(64).unwrap();
                let samples = s.eval_on_grid(&g).unwrap();
                let back = TrigSeries::from_samples(&samples, s.bandwidth()).unwrap();
                for j in -(s.bandwidth() as i64)..=s.bandwidth() as i64 {
                    prop_assert!((back.get(j) - s.get(j)).norm() < 1e-13);
                }
                let l2: f64 = samples.iter().map(|x| x.norm_sqr()).sum::<f64>() * g.spacing();
                let parseval = 2.0 * PI * s.energy();
                prop_assert!((l2 - parseval).abs() <= 1e-10 * parseval.max(1e-300));
            }
        }
    }
}
