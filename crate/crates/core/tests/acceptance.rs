//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the binary
//! exits non-zero when any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use opuc_lab::experiments::{
    self, cosine_weight, fit_loglog, format_float, random_trig_weight, run_growth_scan,
    run_localization_suite, run_szego_asymptotics, AppendixConfig, LocalizationConfig,
    ScanRegime, Status,
};
use opuc_lab::extremal::{self, fejer_riesz};
use opuc_lab::opuc::{self, MeasureSpec};
use opuc_lab::{roots, solver, Grid, TrigSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = experiments::DEFAULT_SEED;

struct Outcome {
    ok: bool,
    detail: String,
}

type Criterion = fn() -> opuc_lab::Result<Outcome>;

fn orthonormality() -> opuc_lab::Result<Outcome> {
    let grid = Grid::new(1024)?;
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let w = random_trig_weight(SEED + i, 0.2, 5.0, 6, grid)?;
        worst = worst.max(opuc::orthonormality_residual(&w, 32)?);
    }
    Ok(Outcome {
        ok: worst < 1e-8,
        detail: format!("max |<phi_j, phi_k> - delta_jk| = {} (< 1e-8)", format_float(worst)),
    })
}

fn fixed_point_matches_levinson() -> opuc_lab::Result<Outcome> {
    let grid = Grid::new(2048)?;
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let w = random_trig_weight(SEED + 100 + i, 1.0, 2.0, 6, grid)?;
        for n in [8, 16, 32, 64] {
            let fp = solver::monic_fixed_point(&w, n, None, 1e-13, 100_000)?;
            let lev = opuc::monic_polynomial(&w, n)?;
            worst = worst.max(fp.monic.max_coeff_diff(&lev));
        }
    }
    Ok(Outcome {
        ok: worst < 1e-8,
        detail: format!("max coefficient gap {} (< 1e-8)", format_float(worst)),
    })
}

fn splice_round_trip() -> opuc_lab::Result<Outcome> {
    let r = extremal::build_small_deviation(0.5, 16)?;
    let s = r.splice.as_ref().expect("splice check enabled by default");
    let tail = s.tail_residuals.iter().take(4).copied().fold(0.0, f64::max);
    Ok(Outcome {
        ok: s.poly_residual < 1e-6 && tail < 1e-4 && s.tail_residuals.len() >= 4,
        detail: format!(
            "polynomial gap {} (< 1e-6), tail gap {} (< 1e-4)",
            format_float(s.poly_residual),
            format_float(tail)
        ),
    })
}

fn small_deviation_growth() -> opuc_lab::Result<Outcome> {
    let scan = run_growth_scan(ScanRegime::Small, 0.5, &[32, 64, 128, 256])?;
    let slope_ok = scan.fit.within(0.10, 0.40);
    let lo = scan.reports.iter().map(|r| r.clipped_stats.min).fold(f64::INFINITY, f64::min);
    let hi = scan.reports.iter().map(|r| r.clipped_stats.max).fold(0.0, f64::max);
    let clip_ok = lo >= 1.0 && hi <= 1.0 + 1.5;
    let constants: Vec<String> = scan
        .reports
        .iter()
        .map(|r| format!("n={}: {}", r.n, format_float((r.clipped_stats.max - 1.0) / r.param)))
        .collect();
    Ok(Outcome {
        ok: slope_ok && clip_ok,
        detail: format!(
            "{} in [0.10, 0.40]: {}; w1 in [{}, {}] vs [1, 2.5]: {}; (max w1 - 1)/eps {}",
            scan.fit.describe(),
            if slope_ok { "ok" } else { "out" },
            format_float(lo),
            format_float(hi),
            if clip_ok { "ok" } else { "out" },
            constants.join(", ")
        ),
    })
}

fn large_deviation_growth() -> opuc_lab::Result<Outcome> {
    let scan = run_growth_scan(ScanRegime::Large, 0.8, &[64, 128, 256, 512])?;
    let achieved: Vec<String> = scan
        .reports
        .iter()
        .map(|r| format!("n={}: {}", r.n, format_float(r.achieved_t)))
        .collect();
    Ok(Outcome {
        ok: scan.fit.within(0.25, 0.55),
        detail: format!(
            "{} in [0.25, 0.55]; achieved T {} vs tau^-4 = 625 (report)",
            scan.fit.describe(),
            achieved.join(", ")
        ),
    })
}

fn localization_inequality() -> opuc_lab::Result<Outcome> {
    let cfg = LocalizationConfig {
        include_identical: false,
        include_swapped: false,
        ..LocalizationConfig::default()
    };
    let cases = experiments::localization_cases(&cfg)?;
    let suite = run_localization_suite(&cases, &[8, 16, 32, 64]);
    let held = suite.rows.iter().filter(|r| r.report.holds).count();
    let margin = suite
        .rows
        .iter()
        .map(|r| r.report.rhs / r.report.lhs)
        .fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        ok: cases.len() == 6 && suite.errors.is_empty() && held == 24 && suite.rows.len() == 24,
        detail: format!(
            "{held}/{} rows with lhs <= rhs over {} pairs, {} errors, min rhs/lhs {}",
            suite.rows.len(),
            cases.len(),
            suite.errors.len(),
            format_float(margin)
        ),
    })
}

fn upper_bound_boundedness() -> opuc_lab::Result<Outcome> {
    let grid = Grid::new(4096)?;
    let ns = [16, 32, 64, 128, 256];
    let mut worst = f64::NEG_INFINITY;
    let mut fits = Vec::new();
    for i in 0..3 {
        let w = random_trig_weight(SEED + 200 + i, 1.0, 1.5, 5, grid)?;
        let rows = solver::p_norm_profile(&w, &ns, 8.0)?;
        let fit = fit_loglog(
            &ns.iter().map(|&n| n as f64).collect::<Vec<_>>(),
            &rows.iter().map(|r| r.lp_norm).collect::<Vec<_>>(),
        )?;
        worst = worst.max(fit.ci_high);
        fits.push(format_float(fit.slope));
    }
    Ok(Outcome {
        ok: worst < 0.05,
        detail: format!("L8 slopes {} with largest upper 95% bound {} (< 0.05)", fits.join(", "), format_float(worst)),
    })
}

fn appendix_suites() -> opuc_lab::Result<Outcome> {
    let out = experiments::run_appendix_suites(&AppendixConfig::default())?;
    let failed: Vec<&str> = out.failures().map(|c| c.name.as_str()).collect();
    let envelope = out
        .checks
        .iter()
        .filter(|c| c.name.starts_with("appendix.re_h_envelope.p0.5"))
        .map(|c| c.value)
        .fold(0.0, f64::max);
    let margin = out
        .checks
        .iter()
        .filter(|c| c.name.starts_with("appendix.arg_big_h_margin"))
        .map(|c| c.value)
        .fold(f64::INFINITY, f64::min);
    Ok(Outcome {
        ok: failed.is_empty() && out.count(Status::Pass) > 0,
        detail: format!(
            "{} asserted checks pass, failing {:?}; Re h envelope at eps 0.5 {} (< 25); arg H margin constant c = {}",
            out.count(Status::Pass),
            failed,
            format_float(envelope),
            format_float(margin)
        ),
    })
}

fn fejer_riesz_certification() -> opuc_lab::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 300);
    let grid = Grid::new(1024)?;
    let mut worst_res: f64 = 0.0;
    let mut min_root = f64::INFINITY;
    for _ in 0..20 {
        let d: usize = rng.gen_range(1..=63);
        let a: Vec<(f64, f64)> = (1..=d)
            .map(|k| {
                let s = 1.0 / k as f64;
                (rng.gen_range(-s..s), rng.gen_range(-s..s))
            })
            .collect();
        let raw: Vec<f64> = grid
            .thetas()
            .iter()
            .map(|t| {
                a.iter()
                    .enumerate()
                    .map(|(k, (x, y))| x * ((k + 1) as f64 * t).cos() + y * ((k + 1) as f64 * t).sin())
                    .sum()
            })
            .collect();
        let (mn, mx) = raw.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(p, q), &v| (p.min(v), q.max(v)));
        let shift = 0.1 * (mx - mn) - mn;
        let vals: Vec<f64> = raw.iter().map(|v| v + shift).collect();
        let t = TrigSeries::from_real_samples(&vals, d)?;
        let q = fejer_riesz(&t, d + 1)?;
        let qv = q.eval_on_grid(&grid)?;
        let tmax = vals.iter().copied().fold(0.0, f64::max);
        let res = qv.iter().zip(&vals).map(|(v, t)| (v.norm_sqr() - t).abs()).fold(0.0, f64::max) / tmax;
        worst_res = worst_res.max(res);
        min_root = min_root.min(roots::root_modulus_range(&q)?.0);
    }
    Ok(Outcome {
        ok: worst_res < 1e-9 && min_root > 1.0,
        detail: format!(
            "max ||q|^2 - t| / max t = {} (< 1e-9), min |root| = {} (> 1)",
            format_float(worst_res),
            format_float(min_root)
        ),
    })
}

fn szego_asymptotics() -> opuc_lab::Result<Outcome> {
    let w = cosine_weight(0.3, Grid::new(4096)?)?;
    let rows = run_szego_asymptotics(&w, &[16, 128])?;
    Ok(Outcome {
        ok: rows[1].residual < rows[0].residual,
        detail: format!(
            "residual {} at n = 128 vs {} at n = 16",
            format_float(rows[1].residual),
            format_float(rows[0].residual)
        ),
    })
}

fn determinism() -> opuc_lab::Result<Outcome> {
    let mut mismatched = Vec::new();
    for name in ["appendix", "localization", "szego"] {
        let a = experiments::run_named_suite(name, None)?;
        let b = experiments::run_named_suite(name, None)?;
        if a.table.to_csv() != b.table.to_csv() || a.summary_json() != b.summary_json() {
            mismatched.push(name);
        }
    }
    Ok(Outcome {
        ok: mismatched.is_empty(),
        detail: format!("byte-identical CSV and JSON on rerun; mismatched suites {mismatched:?}"),
    })
}

fn uniform_weight_sanity() -> MeasureSpec {
    MeasureSpec::uniform_probability(Grid::for_degree(8))
}

fn main() -> ExitCode {
    // touch the library once so the first timed criterion excludes setup
    let _ = opuc::orthonormal(&uniform_weight_sanity(), 4);

    let criteria: [(&str, Criterion, u64); 11] = [
        ("orthonormality of random weights", orthonormality, 10),
        ("fixed point equals Levinson", fixed_point_matches_levinson, 30),
        ("spliced coefficients of the small construction", splice_round_trip, 20),
        ("small-deviation growth and clip bound", small_deviation_growth, 60),
        ("large-deviation growth", large_deviation_growth, 120),
        ("localization inequality", localization_inequality, 30),
        ("bounded L8 norms for 1 <= w <= 1.5", upper_bound_boundedness, 30),
        ("kernel estimate suites", appendix_suites, 60),
        ("Fejer-Riesz self-certification", fejer_riesz_certification, 10),
        ("Szego asymptotics residual decrease", szego_asymptotics, 10),
        ("deterministic suite output", determinism, 5),
    ];
    let mut failed = 0;
    for (i, (title, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (ok, detail) = match result {
            Ok(o) => (o.ok && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.2}s of {}s)",
            i + 1,
            title,
            if ok { "PASS" } else { "FAIL" },
            detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
