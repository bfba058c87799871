use opuc_lab::extremal::fejer_riesz;
use opuc_lab::opuc::{self, MeasureSpec, VerblunskySeq};
use opuc_lab::roots;
use opuc_lab::solver::{project, ProjectionSpec};
use opuc_lab::{ComplexPoly, Grid, TrigSeries, C64};
use proptest::prelude::*;

fn complex_vec(len: usize, r: f64) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-r..r, -r..r), len).prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
}

fn disk_points(len: usize, r: f64) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((0.0..r, -3.2f64..3.2), len)
        .prop_map(|v| v.into_iter().map(|(m, t)| C64::from_polar(m, t)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_is_an_involution(c in complex_vec(9, 2.0)) {
        let p = ComplexPoly::new(c);
        let back = p.star(8).unwrap().star(8).unwrap();
        prop_assert!(back.max_coeff_diff(&p) < 1e-15);
    }

    #[test]
    fn recursion_roots_stay_inside(g in disk_points(12, 0.8)) {
        let v = VerblunskySeq::new(g).unwrap();
        let o = opuc::szego_recursion(&v, 12);
        let (_, hi) = roots::root_modulus_range(&o.phi).unwrap();
        prop_assert!(hi < 1.0);
    }

    #[test]
    fn coefficients_survive_measure_round_trip(g in disk_points(8, 0.6)) {
        let v = VerblunskySeq::new(g).unwrap();
        let o = opuc::szego_recursion(&v, 8);
        // aliasing decays like r^N for the largest root modulus r
        let (_, r) = roots::root_modulus_range(&o.phi).unwrap();
        let n = ((-40.0 / r.ln()).max(1024.0) as usize).next_power_of_two();
        prop_assume!(n <= 1 << 18);
        let m = opuc::bernstein_szego(&o, &Grid::new(n).unwrap()).unwrap();
        let back = opuc::verblunsky_from_measure(&m, 8).unwrap();
        for (a, b) in back.gamma().iter().zip(v.gamma()) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn orthonormal_for_positive_trig_weights(a in prop::collection::vec(-0.15f64..0.15, 6)) {
        let m = MeasureSpec::from_fn(
            Grid::new(512).unwrap(),
            |t| 1.0 + a.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * t).cos()).sum::<f64>(),
            "w",
        ).unwrap();
        prop_assert!(opuc::orthonormality_residual(&m, 12).unwrap() < 1e-10);
    }

    #[test]
    fn projection_is_idempotent(c in complex_vec(17, 1.0), lo in -8i64..0, width in 0i64..8) {
        let f = TrigSeries::new(c).unwrap();
        let p = ProjectionSpec::new(lo, lo + width).unwrap();
        let once = project(&f, p);
        prop_assert_eq!(project(&once, p), once);
    }

    #[test]
    fn fejer_riesz_reproduces_positive_polynomials(r in disk_points(5, 0.9), s in 0.2f64..3.0) {
        // |s ∏(1 - r_j z)|^2 is positive on the circle
        let q = r.iter().fold(ComplexPoly::new(vec![C64::new(s, 0.0)]), |acc, rj| {
            acc.mul(&ComplexPoly::new(vec![C64::new(1.0, 0.0), -rj]))
        });
        let grid = Grid::new(256).unwrap();
        let vals: Vec<f64> = q.eval_on_grid(&grid).unwrap().iter().map(|v| v.norm_sqr()).collect();
        let t = TrigSeries::from_real_samples(&vals, 5).unwrap();
        let f = fejer_riesz(&t, 6).unwrap();
        let fv = f.eval_on_grid(&grid).unwrap();
        let max = vals.iter().cloned().fold(0.0, f64::max);
        for (a, b) in fv.iter().zip(&vals) {
            prop_assert!((a.norm_sqr() - b).abs() < 1e-9 * max);
        }
        prop_assert!(f.coeff(0).re > 0.0 && f.coeff(0).im.abs() < 1e-12);
    }
}
