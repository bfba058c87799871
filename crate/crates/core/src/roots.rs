//! Root location for complex polynomials: companion-matrix eigenvalues for
//! moderate degree, argument-principle winding counts on the circle beyond.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};

use crate::error::{OpucError, Result};
use crate::trig::{ComplexPoly, Degree, C64, ONE, ZERO};

/// Degree above which zero counts switch from eigenvalues to winding numbers.
pub const COMPANION_MAX_DEGREE: usize = 256;

/// All roots of `p` via eigenvalues of the companion matrix, each polished by
/// a few Newton steps.
pub fn companion_roots(p: &ComplexPoly) -> Result<Vec<C64>> {
    let d = match p.degree() {
        Degree::NegInfinity => {
            return Err(OpucError::InvalidParameter(
                "the zero polynomial has no isolated roots".into(),
            ))
        }
        Degree::Finite(d) => d,
    };
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = p.coeff(d);
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = ONE;
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeff(i) / lead;
    }
    // unshifted QR stalls on near-unitary companions such as z^n - 1
    let initial = match Schur::try_new(m, f64::EPSILON, 60 * d) {
        Some(s) => s.eigenvalues().map(|e| e.iter().copied().collect()),
        None => None,
    };
    let deriv = derivative(p);
    let roots = match initial {
        Some(r) => r,
        None => aberth(p, &deriv, d)?,
    };
    Ok(roots
        .into_iter()
        .map(|z0| {
            let mut z = z0;
            for _ in 0..3 {
                let dp = deriv.eval(z);
                if dp == ZERO {
                    break;
                }
                let step = p.eval(z) / dp;
                if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect())
}

/// Simultaneous Aberth–Ehrlich iteration from points on a circle of the
/// Cauchy-bound radius.
fn aberth(p: &ComplexPoly, deriv: &ComplexPoly, d: usize) -> Result<Vec<C64>> {
    let lead = p.coeff(d).norm();
    let radius = (0..d)
        .map(|k| (p.coeff(k).norm() / lead).powf(1.0 / (d - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<C64> = (0..d)
        .map(|k| C64::from_polar(radius, 2.0 * PI * (k as f64 + 0.25) / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut biggest: f64 = 0.0;
        for i in 0..d {
            let ratio = p.eval(z[i]) / deriv.eval(z[i]);
            if !ratio.is_finite() {
                continue;
            }
            let repulsion: C64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| ONE / (z[i] - z[j]))
                .sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                biggest = biggest.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if biggest < 1e-15 {
            return Ok(z);
        }
    }
    Err(OpucError::NonConvergence {
        iterations: 500,
        last_change: f64::NAN,
    })
}

pub fn derivative(p: &ComplexPoly) -> ComplexPoly {
    let c = p.trimmed();
    if c.len() <= 1 {
        return ComplexPoly::zero();
    }
    ComplexPoly::new(
        c.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &v)| v * k as f64)
            .collect(),
    )
}

/// Number of zeros of `p` in the open unit disk by the argument principle,
/// evaluated on a grid fine enough that consecutive phase steps stay below π/4.
///
/// Fails when `p` vanishes (numerically) on the circle.
pub fn winding_count(p: &ComplexPoly) -> Result<usize> {
    let d = p.degree().finite().unwrap_or(0);
    let mut n = (16 * (d + 1)).max(1024).next_power_of_two();
    loop {
        let vals = p.eval_on_grid_unchecked(n);
        let scale = p.l1_coeff_norm();
        if vals.iter().any(|v| v.norm() <= 1e-14 * scale) {
            return Err(OpucError::ConstructionViolated(
                "polynomial vanishes on the unit circle".into(),
            ));
        }
        let mut total = 0.0;
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let step = (vals[(k + 1) % n] / vals[k]).arg();
            max_step = max_step.max(step.abs());
            total += step;
        }
        if max_step < std::f64::consts::FRAC_PI_4 || n >= 1 << 22 {
            let w = (total / (2.0 * std::f64::consts::PI)).round();
            return Ok(w.max(0.0) as usize);
        }
        n *= 2;
    }
}

/// Smallest and largest root modulus (companion path).
pub fn root_modulus_range(p: &ComplexPoly) -> Result<(f64, f64)> {
    let r = companion_roots(p)?;
    Ok(r.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), z| {
        (lo.min(z.norm()), hi.max(z.norm()))
    }))
}

/// Number of zeros in the open unit disk, choosing the method by degree.
pub fn zeros_inside_disk(p: &ComplexPoly) -> Result<usize> {
    let d = p.degree().finite().unwrap_or(0);
    if d <= COMPANION_MAX_DEGREE {
        Ok(companion_roots(p)?.iter().filter(|z| z.norm() < 1.0).count())
    } else {
        winding_count(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_quadratic() {
        // (z - 2)(z + 0.5) = z^2 - 1.5 z - 1
        let p = ComplexPoly::from_real(&[-1.0, -1.5, 1.0]);
        let mut r: Vec<f64> = companion_roots(&p).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] + 0.5).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn roots_of_unity_moduli() {
        let mut c = vec![ZERO; 65];
        c[0] = -ONE;
        c[64] = ONE;
        let (lo, hi) = root_modulus_range(&ComplexPoly::new(c)).unwrap();
        assert!((lo - 1.0).abs() < 1e-10 && (hi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn aberth_on_cyclic_companion() {
        let mut c = vec![ZERO; 257];
        c[0] = -ONE;
        c[256] = ONE;
        let p = ComplexPoly::new(c);
        let r = aberth(&p, &derivative(&p), 256).unwrap();
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12 && (z.powu(256) - ONE).norm() < 1e-9));
    }

    #[test]
    fn winding_agrees_with_companion() {
        // zeros at 0.5, -0.9i (inside) and 1.5 (outside)
        let roots = [C64::new(0.5, 0.0), C64::new(0.0, -0.9), C64::new(1.5, 0.0)];
        let p = roots.iter().fold(ComplexPoly::one(), |acc, &r| {
            acc.mul(&ComplexPoly::new(vec![-r, ONE]))
        });
        assert_eq!(winding_count(&p).unwrap(), 2);
        assert_eq!(zeros_inside_disk(&p).unwrap(), 2);
    }

    #[test]
    fn derivative_of_cubic() {
        let p = ComplexPoly::from_real(&[1.0, 2.0, 3.0, 4.0]);
        let d = derivative(&p);
        assert!(d.max_coeff_diff(&ComplexPoly::from_real(&[2.0, 6.0, 12.0])) < 1e-15);
    }
}
