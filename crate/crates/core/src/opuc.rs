//! The weight → polynomial direction: moments, Verblunsky coefficients,
//! first/second-kind orthonormal polynomials, Bernstein–Szegő measures,
//! Carathéodory functions, Szegő functions and the localization bound.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{OpucError, Result};
use crate::roots;
use crate::trig::{ComplexPoly, Grid, TrigSeries, C64, ONE, ZERO};

/// Steps between direct recomputations of the monic norm in the recursion.
const NORM_REFRESH: usize = 16;

/// Absolutely continuous measure `w(θ) dθ` sampled on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    grid: Grid,
    weight: Vec<f64>,
    label: String,
}

impl MeasureSpec {
    pub fn new(grid: Grid, weight: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if weight.len() != grid.len() {
            return Err(OpucError::InvalidParameter(format!(
                "weight has {} samples for a {}-point grid",
                weight.len(),
                grid.len()
            )));
        }
        if let Some(bad) = weight.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(OpucError::MeasureDegenerate(format!(
                "weight sample {bad} is negative or not finite"
            )));
        }
        if weight.iter().all(|&w| w == 0.0) {
            return Err(OpucError::MeasureDegenerate("weight vanishes identically".into()));
        }
        Ok(MeasureSpec {
            grid,
            weight,
            label: label.into(),
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64, label: impl Into<String>) -> Result<Self> {
        let w = grid.thetas().into_iter().map(f).collect();
        Self::new(grid, w, label)
    }

    /// Lebesgue measure `dθ/(2π)`.
    pub fn uniform_probability(grid: Grid) -> Self {
        MeasureSpec {
            grid,
            weight: vec![1.0 / (2.0 * PI); grid.len()],
            label: "uniform".into(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `∫ w dθ` by the trapezoid rule.
    pub fn total_mass(&self) -> f64 {
        self.weight.iter().sum::<f64>() * self.grid.spacing()
    }

    pub fn scaled(&self, factor: f64) -> MeasureSpec {
        MeasureSpec {
            grid: self.grid,
            weight: self.weight.iter().map(|w| w * factor).collect(),
            label: self.label.clone(),
        }
    }

    /// Rescaled to total mass one.
    pub fn probability(&self) -> MeasureSpec {
        self.scaled(1.0 / self.total_mass())
    }

    pub fn min(&self) -> f64 {
        self.weight.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.weight.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(min, max)` of the weight over grid points with `|θ| <= half_width`.
    pub fn range_on_arc(&self, half_width: f64) -> (f64, f64) {
        self.grid
            .thetas()
            .iter()
            .zip(&self.weight)
            .filter(|(t, _)| t.abs() <= half_width)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &w)| {
                (lo.min(w), hi.max(w))
            })
    }

    /// Trapezoid integral of `f(θ_k)·w(θ_k)`.
    pub fn integrate(&self, f: impl Fn(usize) -> C64) -> C64 {
        self.weight
            .iter()
            .enumerate()
            .map(|(k, &w)| f(k) * w)
            .sum::<C64>()
            * self.grid.spacing()
    }
}

/// Verblunsky (Schur) coefficients with cached `ρ_j = sqrt(1 - |γ_j|^2)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerblunskySeq {
    gamma: Vec<C64>,
    rho: Vec<f64>,
}

impl VerblunskySeq {
    pub fn new(gamma: Vec<C64>) -> Result<Self> {
        let mut rho = Vec::with_capacity(gamma.len());
        for (j, g) in gamma.iter().enumerate() {
            let m = g.norm();
            if !(m < 1.0) {
                return Err(OpucError::NumericalDegeneracy { index: j, modulus: m });
            }
            rho.push((1.0 - g.norm_sqr()).sqrt());
        }
        Ok(VerblunskySeq { gamma, rho })
    }

    pub fn zeros(n: usize) -> Self {
        VerblunskySeq {
            gamma: vec![ZERO; n],
            rho: vec![1.0; n],
        }
    }

    pub fn gamma(&self) -> &[C64] {
        &self.gamma
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// The first `len` coefficients.
    pub fn prefix(&self, len: usize) -> VerblunskySeq {
        let len = len.min(self.len());
        VerblunskySeq {
            gamma: self.gamma[..len].to_vec(),
            rho: self.rho[..len].to_vec(),
        }
    }

    /// Concatenation `γ_0..γ_{n-1}, γ̃_0, γ̃_1, …`.
    pub fn splice(&self, tail: &VerblunskySeq) -> VerblunskySeq {
        let mut gamma = self.gamma.clone();
        gamma.extend_from_slice(&tail.gamma);
        let mut rho = self.rho.clone();
        rho.extend_from_slice(&tail.rho);
        VerblunskySeq { gamma, rho }
    }
}

/// `c_k = ∫ e^{-ikθ} dσ(θ)` for `k = 0..=count` by the grid DFT.
///
/// Fails when the Toeplitz matrix `(c_{j-k})` is not positive definite.
pub fn moments(m: &MeasureSpec, count: usize) -> Result<Vec<C64>> {
    let c = raw_moments(m, count)?;
    levinson(&c, count)?;
    Ok(c)
}

fn raw_moments(m: &MeasureSpec, count: usize) -> Result<Vec<C64>> {
    let series = TrigSeries::from_real_samples(m.weight(), count).map_err(|_| {
        OpucError::MeasureDegenerate(format!(
            "grid of {} points cannot resolve {} moments",
            m.grid().len(),
            count
        ))
    })?;
    Ok((0..=count as i64).map(|k| series.get(k) * (2.0 * PI)).collect())
}

/// Output of the moment recursion: coefficients, monic polynomial of the last
/// degree and its squared norm.
#[derive(Clone, Debug)]
pub struct LevinsonOutput {
    pub verblunsky: VerblunskySeq,
    pub monic: ComplexPoly,
    pub norm_sq: f64,
}

/// Szegő recursion for the monic polynomials driven by moment inner products:
/// `conj(γ_j) = <zΦ_j, 1> / ||Φ_j||^2`, `Φ_{j+1} = zΦ_j - conj(γ_j) Φ_j^*`.
pub fn levinson(c: &[C64], n: usize) -> Result<LevinsonOutput> {
    if c.len() < n + 1 {
        return Err(OpucError::InvalidParameter(format!(
            "{} moments supplied, {} needed",
            c.len(),
            n + 1
        )));
    }
    let mass = c[0].re;
    if !(mass > 0.0) {
        return Err(OpucError::MeasureDegenerate(format!("total mass {mass}")));
    }
    let mut phi = vec![ONE];
    let mut norm_sq = mass;
    let mut gamma = Vec::with_capacity(n);
    for j in 0..n {
        if j > 0 && j % NORM_REFRESH == 0 {
            // ||Φ_j||^2 = <Φ_j, z^j> = Σ_k Φ_{j,k} c_{j-k}
            let direct: C64 = phi.iter().enumerate().map(|(k, &p)| p * c[j - k]).sum();
            norm_sq = direct.re;
        }
        if !(norm_sq > 0.0) {
            return Err(OpucError::MeasureDegenerate(format!(
                "monic norm vanished at degree {j}"
            )));
        }
        let ip: C64 = phi
            .iter()
            .enumerate()
            .map(|(k, &p)| p * c[k + 1].conj())
            .sum();
        let gbar = ip / norm_sq;
        let g = gbar.conj();
        if g.norm() >= 1.0 - 1e-12 {
            return Err(OpucError::NumericalDegeneracy {
                index: j,
                modulus: g.norm(),
            });
        }
        let len = phi.len();
        let mut next = vec![ZERO; len + 1];
        for k in 0..len {
            next[k + 1] += phi[k];
            // Φ_j^*[k] = conj(Φ_j[j - k])
            next[k] -= gbar * phi[len - 1 - k].conj();
        }
        phi = next;
        norm_sq *= 1.0 - g.norm_sqr();
        gamma.push(g);
    }
    Ok(LevinsonOutput {
        verblunsky: VerblunskySeq::new(gamma)?,
        monic: ComplexPoly::new(phi),
        norm_sq,
    })
}

/// `γ_0..γ_{n-1}` of the measure.
pub fn verblunsky_from_measure(m: &MeasureSpec, n: usize) -> Result<VerblunskySeq> {
    Ok(levinson(&raw_moments(m, n)?, n)?.verblunsky)
}

/// Monic orthogonal polynomial `Φ_n` by the moment recursion.
pub fn monic_polynomial(m: &MeasureSpec, n: usize) -> Result<ComplexPoly> {
    Ok(levinson(&raw_moments(m, n)?, n)?.monic)
}

/// First- and second-kind orthonormal polynomials of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoPolySet {
    pub phi: ComplexPoly,
    pub phi_star: ComplexPoly,
    pub psi: ComplexPoly,
    pub psi_star: ComplexPoly,
    pub n: usize,
}

impl OrthoPolySet {
    /// Leading coefficient of `φ_n` (real positive).
    pub fn leading(&self) -> f64 {
        self.phi.coeff(self.n).re
    }

    /// Zeros of `φ_n` in the open disk (all `n` for a valid set).
    pub fn zeros_inside(&self) -> Result<usize> {
        roots::zeros_inside_disk(&self.phi)
    }

    /// Carathéodory function `F_N = ψ_N^* / φ_N^*` at `|z| < 1`.
    pub fn caratheodory(&self, z: C64) -> Result<C64> {
        if !(z.norm() < 1.0) {
            return Err(OpucError::OutsideDisk(z.norm()));
        }
        Ok(self.psi_star.eval(z) / self.phi_star.eval(z))
    }
}

/// Runs the Szegő recursions (first kind with `γ`, second kind with `-γ`)
/// for a probability measure, returning every degree `0..=n`.
pub fn szego_recursion_all(v: &VerblunskySeq, n: usize) -> Vec<OrthoPolySet> {
    assert!(n <= v.len(), "degree {n} needs {n} coefficients, have {}", v.len());
    let mut out = Vec::with_capacity(n + 1);
    let mut phi = vec![ONE];
    let mut phis = vec![ONE];
    let mut psi = vec![ONE];
    let mut psis = vec![ONE];
    for j in 0..=n {
        out.push(OrthoPolySet {
            phi: ComplexPoly::new(phi.clone()),
            phi_star: ComplexPoly::new(phis.clone()),
            psi: ComplexPoly::new(psi.clone()),
            psi_star: ComplexPoly::new(psis.clone()),
            n: j,
        });
        if j == n {
            break;
        }
        let (g, r) = (v.gamma[j], 1.0 / v.rho[j]);
        let step = |p: &[C64], ps: &[C64], g: C64| -> (Vec<C64>, Vec<C64>) {
            let len = p.len();
            let mut np = vec![ZERO; len + 1];
            let mut nps = vec![ZERO; len + 1];
            for k in 0..len {
                np[k + 1] += p[k] * r;
                np[k] -= g.conj() * ps[k] * r;
                nps[k] += ps[k] * r;
                nps[k + 1] -= g * p[k] * r;
            }
            (np, nps)
        };
        let (a, b) = step(&phi, &phis, g);
        let (c, d) = step(&psi, &psis, -g);
        phi = a;
        phis = b;
        psi = c;
        psis = d;
    }
    out
}

/// Orthonormal polynomials of degree `n` for the probability measure with
/// coefficients `v`.
pub fn szego_recursion(v: &VerblunskySeq, n: usize) -> OrthoPolySet {
    szego_recursion_all(v, n).pop().expect("recursion yields degree n")
}

fn rescale(set: OrthoPolySet, s: f64) -> OrthoPolySet {
    let f = C64::new(s, 0.0);
    OrthoPolySet {
        phi: set.phi.scale(f),
        phi_star: set.phi_star.scale(f),
        psi: set.psi.scale(f),
        psi_star: set.psi_star.scale(f),
        n: set.n,
    }
}

/// Orthonormal set of degree `n` for `m` (mass-scaled: `φ_n(σ) = M^{-1/2} φ_n(σ/M)`).
pub fn orthonormal(m: &MeasureSpec, n: usize) -> Result<OrthoPolySet> {
    let v = verblunsky_from_measure(m, n)?;
    Ok(rescale(szego_recursion(&v, n), m.total_mass().powf(-0.5)))
}

/// Orthonormal sets of every degree `0..=n` for `m`.
pub fn orthonormal_all(m: &MeasureSpec, n: usize) -> Result<Vec<OrthoPolySet>> {
    let v = verblunsky_from_measure(m, n)?;
    let s = m.total_mass().powf(-0.5);
    Ok(szego_recursion_all(&v, n)
        .into_iter()
        .map(|o| rescale(o, s))
        .collect())
}

/// `max_{j,k<=n} |∫ φ_j conj(φ_k) dσ - δ_{jk}|` by grid quadrature.
pub fn orthonormality_residual(m: &MeasureSpec, n: usize) -> Result<f64> {
    let sets = orthonormal_all(m, n)?;
    let grid = m.grid();
    let vals: Vec<Vec<C64>> = sets
        .iter()
        .map(|o| o.phi.eval_on_grid(grid))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for j in 0..=n {
        for k in j..=n {
            let g = m.integrate(|i| vals[j][i] * vals[k][i].conj());
            let target = if j == k { ONE } else { ZERO };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

/// Bernstein–Szegő measure `dθ / (2π |φ_N|^2)` sampled on `grid`.
pub fn bernstein_szego(o: &OrthoPolySet, grid: &Grid) -> Result<MeasureSpec> {
    let v = o.phi.eval_on_grid(grid)?;
    MeasureSpec::new(
        *grid,
        v.iter().map(|x| 1.0 / (2.0 * PI * x.norm_sqr())).collect(),
        format!("bernstein-szego(n={})", o.n),
    )
}

/// `F_N(z) = ψ_N^*(z) / φ_N^*(z)` for `|z| < 1`.
pub fn caratheodory(o: &OrthoPolySet, z: C64) -> Result<C64> {
    o.caratheodory(z)
}

/// Localization constants and the Szegő (outer) function of a weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SzegoData {
    /// `exp((1/4π) ∫ log(2π w) dθ)`.
    pub lambda_w: f64,
    /// `sqrt(∫ w dθ)`.
    pub big_lambda_w: f64,
    /// Coefficients of `log Π` (analytic: indices `>= 0` only).
    pub log_outer: TrigSeries,
}

impl SzegoData {
    /// Boundary values `Π(e^{iθ_k})`.
    pub fn outer_on_grid(&self, grid: &Grid) -> Result<Vec<C64>> {
        Ok(self
            .log_outer
            .eval_on_grid(grid)?
            .into_iter()
            .map(|g| g.exp())
            .collect())
    }

    /// `Π(0) = exp(log Π(0)) > 0`.
    pub fn outer_at_zero(&self) -> f64 {
        self.log_outer.mean().re.exp()
    }
}

pub fn szego_data(m: &MeasureSpec) -> Result<SzegoData> {
    let min = m.min();
    if !(min > 0.0) {
        return Err(OpucError::LogDivergence(min));
    }
    let n = m.grid().len();
    let log_w: Vec<f64> = m.weight().iter().map(|w| (2.0 * PI * w).ln()).collect();
    let mean_log = log_w.iter().sum::<f64>() / n as f64;
    let lambda_w = (0.5 * mean_log).exp();
    let big_lambda_w = m.total_mass().sqrt();
    // log|Π| = -½ log(2πw); Π = exp(u + i·ũ) with analytic coefficients 2û_j, j > 0
    let u: Vec<f64> = log_w.iter().map(|l| -0.5 * l).collect();
    let band = n / 2 - 1;
    let us = TrigSeries::from_real_samples(&u, band)?;
    let log_outer = us.map_indexed(|j, c| match j {
        0 => C64::new(c.re, 0.0),
        j if j > 0 => c * 2.0,
        _ => ZERO,
    });
    Ok(SzegoData {
        lambda_w,
        big_lambda_w,
        log_outer,
    })
}

/// Both sides of the localization inequality for two weights that agree on
/// `[-ε, ε]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub n: usize,
    pub eps_arc: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub lambda_w1: f64,
    pub big_lambda_w1: f64,
    pub big_lambda_w2: f64,
    pub outside_integral: f64,
    /// `|φ_n(1, w1) / φ_n(1, w2)|` divided by `ε m1 / m2`, the lower-band constant.
    pub lower_band_constant: f64,
    /// `|φ_n(1, w1) / φ_n(1, w2)|` divided by `m2 / (ε m1)`, the upper-band constant.
    pub upper_band_constant: f64,
}

pub fn localization_bound(
    w1: &MeasureSpec,
    w2: &MeasureSpec,
    eps_arc: f64,
    n: usize,
) -> Result<LocalizationReport> {
    if w1.grid() != w2.grid() {
        return Err(OpucError::InvalidParameter(
            "weights must share one grid".into(),
        ));
    }
    if !(eps_arc > 0.0) {
        return Err(OpucError::InvalidParameter("arc half-width must be positive".into()));
    }
    let grid = *w1.grid();
    let thetas = grid.thetas();
    let scale = w1.max().max(w2.max());
    let disagreement = thetas
        .iter()
        .enumerate()
        .filter(|(_, t)| t.abs() <= eps_arc)
        .map(|(k, _)| (w1.weight()[k] - w2.weight()[k]).abs())
        .fold(0.0, f64::max);
    if disagreement > 1e-12 * scale {
        return Err(OpucError::AgreementViolated(disagreement));
    }
    let s1 = szego_data(w1)?;
    let s2 = szego_data(w2)?;
    let p1 = orthonormal(w1, n)?.phi;
    let p2 = orthonormal(w2, n)?.phi;
    let lhs = (p1.eval(ONE) / p2.eval(ONE)).norm();
    let v1 = p1.eval_on_grid(&grid)?;
    let v2 = p2.eval_on_grid(&grid)?;
    let outside_integral: f64 = thetas
        .iter()
        .enumerate()
        .filter(|(_, t)| t.abs() > eps_arc)
        .map(|(k, _)| (v1[k] * v2[k]).norm() * (w1.weight()[k] + w2.weight()[k]))
        .sum::<f64>()
        * grid.spacing();
    let rhs = s2.big_lambda_w / s1.lambda_w
        + 4.0 * s1.big_lambda_w / (eps_arc * s1.lambda_w) * outside_integral;
    let m1 = w1.min().min(w2.min());
    let m2 = w1.max().max(w2.max());
    Ok(LocalizationReport {
        n,
        eps_arc,
        lhs,
        rhs,
        holds: lhs <= rhs,
        lambda_w1: s1.lambda_w,
        big_lambda_w1: s1.big_lambda_w,
        big_lambda_w2: s2.big_lambda_w,
        outside_integral,
        lower_band_constant: lhs / (eps_arc * m1 / m2),
        upper_band_constant: lhs / (m2 / (eps_arc * m1)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid {
        Grid::new(1024).unwrap()
    }

    fn poisson(a: f64) -> MeasureSpec {
        MeasureSpec::from_fn(
            Grid::new(8192).unwrap(),
            |t| (1.0 - a * a) / (2.0 * PI * (C64::from_polar(1.0, t) - a).norm_sqr()),
            "poisson",
        )
        .unwrap()
    }

    fn random_trig_weight(rng: &mut ChaCha8Rng, lo: f64, hi: f64, g: Grid) -> MeasureSpec {
        let deg = 6;
        let a: Vec<(f64, f64)> = (0..deg)
            .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let raw: Vec<f64> = g
            .thetas()
            .iter()
            .map(|t| {
                a.iter()
                    .enumerate()
                    .map(|(k, (x, y))| {
                        let kt = (k + 1) as f64 * t;
                        x * kt.cos() + y * kt.sin()
                    })
                    .sum()
            })
            .collect();
        let (mn, mx) = raw
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let w = raw.iter().map(|v| lo + (hi - lo) * (v - mn) / (mx - mn)).collect();
        MeasureSpec::new(g, w, "random-trig").unwrap()
    }

    #[test]
    fn uniform_moments_and_coefficients() {
        let m = MeasureSpec::uniform_probability(grid());
        let c = moments(&m, 8).unwrap();
        assert!((c[0] - ONE).norm() < 1e-14);
        assert!(c[1..].iter().all(|v| v.norm() < 1e-15));
        let v = verblunsky_from_measure(&m, 10).unwrap();
        assert!(v.gamma().iter().all(|g| g.norm() < 1e-15));
    }

    #[test]
    fn single_mode_moment() {
        let m = MeasureSpec::from_fn(grid(), |t| (1.0 + t.cos()) / (2.0 * PI), "cos").unwrap();
        let c = moments(&m, 3).unwrap();
        assert!((c[1] - C64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn poisson_weight_moments_and_coefficients() {
        // brute-force midpoint quadrature of c_1 as oracle
        let a = 0.5;
        let pts = 8192;
        let h = 2.0 * PI / pts as f64;
        let c1: C64 = (0..pts)
            .map(|k| {
                let t = -PI + (k as f64 + 0.5) * h;
                let w = (1.0 - a * a) / (2.0 * PI * (C64::from_polar(1.0, t) - a).norm_sqr());
                C64::from_polar(w, -t)
            })
            .sum::<C64>()
            * h;
        assert!((c1 - C64::new(0.5, 0.0)).norm() < 1e-12);
        let m = poisson(a);
        let c = moments(&m, 4).unwrap();
        assert!((c[1] - c1).norm() < 1e-12);
        let v = verblunsky_from_measure(&m, 6).unwrap();
        assert!((v.gamma()[0] - C64::new(0.5, 0.0)).norm() < 1e-12);
        assert!(v.gamma()[1..].iter().all(|g| g.norm() < 1e-12));
    }

    #[test]
    fn one_step_recursion_gives_poisson_weight() {
        let v = VerblunskySeq::new(vec![C64::new(0.5, 0.0)]).unwrap();
        let o = szego_recursion(&v, 1);
        let want = ComplexPoly::from_real(&[-0.5, 1.0]).scale(C64::new(1.0 / 0.75f64.sqrt(), 0.0));
        assert!(o.phi.max_coeff_diff(&want) < 1e-15);
        let bs = bernstein_szego(&o, &Grid::new(8192).unwrap()).unwrap();
        let p = poisson(0.5);
        for (x, y) in bs.weight().iter().zip(p.weight()) {
            assert!((x - y).abs() < 1e-10 * y);
        }
    }

    #[test]
    fn zero_coefficients_are_fixed_point() {
        let o = szego_recursion(&VerblunskySeq::zeros(5), 5);
        assert!(o.phi.max_coeff_diff(&ComplexPoly::monomial(5)) == 0.0);
        assert!(o.psi.max_coeff_diff(&ComplexPoly::monomial(5)) == 0.0);
        assert!(o.phi_star.max_coeff_diff(&ComplexPoly::one()) == 0.0);
        assert!(o.psi_star.max_coeff_diff(&ComplexPoly::one()) == 0.0);
        let f = o.caratheodory(C64::new(0.3, -0.2)).unwrap();
        assert!((f - ONE).norm() < 1e-15);
    }

    #[test]
    fn roots_inside_and_carathéodory_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let gamma: Vec<C64> = (0..32)
                .map(|_| C64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(-PI..PI)))
                .collect();
            let v = VerblunskySeq::new(gamma).unwrap();
            let o = szego_recursion(&v, 32);
            assert_eq!(o.zeros_inside().unwrap(), 32);
            assert!(o.leading() > 0.0);
            assert!(o.phi_star.max_coeff_diff(&o.phi.star(32).unwrap()) < 1e-12);
            let o16 = szego_recursion(&v, 16);
            assert!((o16.caratheodory(ZERO).unwrap() - ONE).norm() < 1e-12);
            for _ in 0..1000 {
                let z = C64::from_polar(rng.gen_range(0.0f64..1.0).sqrt() * 0.999, rng.gen_range(-PI..PI));
                assert!(o16.caratheodory(z).unwrap().re > 0.0);
            }
        }
        let o = szego_recursion(&VerblunskySeq::zeros(2), 2);
        assert!(matches!(o.caratheodory(C64::new(1.0, 0.0)), Err(OpucError::OutsideDisk(_))));
    }

    #[test]
    fn degenerate_coefficient_rejected() {
        assert!(matches!(
            VerblunskySeq::new(vec![C64::new(0.2, 0.0), C64::new(1.0, 0.0)]),
            Err(OpucError::NumericalDegeneracy { index: 1, .. })
        ));
    }

    #[test]
    fn too_many_moments_for_grid() {
        let m = MeasureSpec::uniform_probability(Grid::new(16).unwrap());
        assert!(matches!(moments(&m, 8), Err(OpucError::MeasureDegenerate(_))));
    }

    #[test]
    fn orthonormality_for_random_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let m = random_trig_weight(&mut rng, 0.2, 5.0, grid());
            assert!(orthonormality_residual(&m, 32).unwrap() < 1e-8);
        }
    }

    #[test]
    fn bernstein_szego_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_trig_weight(&mut rng, 0.1, 10.0, Grid::new(4096).unwrap()).probability();
        let n = 24;
        let v = verblunsky_from_measure(&m, 40).unwrap();
        let o = szego_recursion(&v, n);
        let bs = bernstein_szego(&o, m.grid()).unwrap();
        assert!((bs.total_mass() - 1.0).abs() < 1e-10);
        let back = verblunsky_from_measure(&bs, 40).unwrap();
        for j in 0..n {
            assert!((back.gamma()[j] - v.gamma()[j]).norm() < 1e-8);
        }
        for j in n..40 {
            assert!(back.gamma()[j].norm() < 1e-8);
        }
        let (c_orig, c_bs) = (moments(&m, 30).unwrap(), moments(&bs, 30).unwrap());
        for k in 0..=n {
            assert!((c_orig[k] - c_bs[k]).norm() < 1e-9);
        }
        assert!((c_orig[n + 1] - c_bs[n + 1]).norm() > 1e-6);
    }

    #[test]
    fn scaling_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = random_trig_weight(&mut rng, 0.5, 2.0, grid());
        let n = 12;
        let base = orthonormal(&m, n).unwrap().phi;
        let monic = monic_polynomial(&m, n).unwrap();
        for &a in &[0.5, 2.0, 7.3] {
            let scaled = orthonormal(&m.scaled(a), n).unwrap().phi;
            assert!(base.max_coeff_diff(&scaled.scale(C64::new(a.sqrt(), 0.0))) < 1e-10);
            assert!(monic.max_coeff_diff(&monic_polynomial(&m.scaled(a), n).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn monic_ratio_within_szego_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = random_trig_weight(&mut rng, 0.3, 1.0, grid()).probability();
        let s = szego_data(&m).unwrap();
        let delta = 2.0 * PI * m.min();
        for n in [4, 16, 32] {
            let o = orthonormal(&m, n).unwrap();
            let ratio = 1.0 / o.leading();
            assert!(ratio <= 1.0 + 1e-12);
            assert!(ratio >= s.lambda_w - 1e-12);
            assert!(ratio >= delta.sqrt());
        }
    }

    #[test]
    fn projection_criterion_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let m = random_trig_weight(&mut rng, 1.0, 3.0, grid());
        let n = 20;
        let p = monic_polynomial(&m, n).unwrap();
        let vals = p.eval_on_grid(m.grid()).unwrap();
        let prod: Vec<C64> = vals.iter().zip(m.weight()).map(|(v, w)| v * w).collect();
        let s = TrigSeries::from_samples(&prod, n).unwrap();
        for j in 0..n as i64 {
            assert!(s.get(j).norm() < 1e-8);
        }
    }

    #[test]
    fn szego_data_constants() {
        let u = szego_data(&MeasureSpec::uniform_probability(grid())).unwrap();
        assert!((u.lambda_w - 1.0).abs() < 1e-14 && (u.big_lambda_w - 1.0).abs() < 1e-14);
        assert!(u.outer_on_grid(&grid()).unwrap().iter().all(|p| (p - ONE).norm() < 1e-13));
        let one = MeasureSpec::from_fn(grid(), |_| 1.0, "one").unwrap();
        let s = szego_data(&one).unwrap();
        assert!((s.lambda_w - (2.0 * PI).sqrt()).abs() < 1e-13);
        assert!((s.big_lambda_w - (2.0 * PI).sqrt()).abs() < 1e-13);
        let zero_somewhere = MeasureSpec::from_fn(grid(), |t| t.abs(), "abs").unwrap();
        assert!(matches!(szego_data(&zero_somewhere), Err(OpucError::LogDivergence(_))));
    }

    #[test]
    fn outer_function_modulus() {
        let m = MeasureSpec::from_fn(grid(), |t| (1.0 + 0.3 * t.cos() + 0.1 * (2.0 * t).sin()) / (2.0 * PI), "smooth")
            .unwrap();
        let s = szego_data(&m).unwrap();
        let pi = s.outer_on_grid(m.grid()).unwrap();
        for (p, w) in pi.iter().zip(m.weight()) {
            let lhs = 1.0 / p.norm_sqr();
            assert!((lhs - 2.0 * PI * w).abs() < 1e-8 * 2.0 * PI * w);
        }
        assert!(s.outer_at_zero() > 0.0);
    }

    #[test]
    fn localization_identical_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let m = random_trig_weight(&mut rng, 0.5, 2.0, grid()).probability();
        let r = localization_bound(&m, &m, 0.3, 16).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!(r.rhs >= 1.0 && r.holds);
    }

    #[test]
    fn localization_rejects_disagreement() {
        let g = grid();
        let a = MeasureSpec::from_fn(g, |_| 1.0, "a").unwrap();
        let b = MeasureSpec::from_fn(g, |t| 1.0 + 0.1 * t.cos(), "b").unwrap();
        assert!(matches!(
            localization_bound(&a, &b, 0.2, 4),
            Err(OpucError::AgreementViolated(_))
        ));
    }
}
