mod svg;
mod weight_spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use opuc_lab::experiments::{self, format_float, Status, SUITE_NAMES};
use opuc_lab::extremal::{self, ConstructionOptions, ConstructionReport, Regime};
use opuc_lab::opuc::{self, MeasureSpec};
use opuc_lab::{solver, ComplexPoly, Grid, OpucError, C64};
use serde::Serialize;

use weight_spec::{SpecError, WeightSpecFile};

const GRID_ENV: &str = "OPUC_GRID_N";

#[derive(Parser)]
#[command(name = "opuc-lab", version, about = "Orthogonal polynomials on the unit circle: constructions and experiment suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Small,
    Large,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Recursion,
    FixedPoint,
}

#[derive(Subcommand)]
enum Command {
    /// Build an extremal weight and write its report, samples and polynomial.
    Construct {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Verblunsky coefficients, monic polynomial and Szegő constants of a weight.
    Opuc {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "recursion")]
        method: Method,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run a named experiment suite.
    Suite {
        #[arg(long)]
        name: String,
        /// `default` or a path to a JSON config.
        #[arg(long, default_value = "default")]
        config: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

enum Failure {
    Assertion(String),
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Assertion(m) | Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<OpucError> for Failure {
    fn from(e: OpucError) -> Self {
        match e {
            OpucError::InvalidParameter(_) | OpucError::GridNotPowerOfTwo(_) => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn grid_override() -> Result<Option<usize>, Failure> {
    match std::env::var(GRID_ENV) {
        Err(_) => Ok(None),
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{GRID_ENV}={v} is not an integer")))?;
            Grid::new(n).map_err(|e| Failure::Usage(format!("{GRID_ENV}: {e}")))?;
            Ok(Some(n))
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn csv_header(schema: &str, columns: &str) -> String {
    format!("# opuc-lab v{} schema={schema}\n{columns}\n", experiments::SCHEMA_VERSION)
}

fn poly_csv(p: &ComplexPoly) -> String {
    let mut out = csv_header("poly", "k,re,im");
    for (k, c) in p.coeffs().iter().enumerate() {
        out.push_str(&format!("{k},{},{}\n", format_float(c.re), format_float(c.im)));
    }
    out
}

#[derive(Serialize)]
struct ConstructOutput<'a> {
    schema: String,
    #[serde(flatten)]
    report: &'a ConstructionReport,
    consistency: Option<f64>,
}

fn construct(regime: RegimeArg, eps: Option<f64>, alpha: Option<f64>, n: usize, out: &Path) -> CmdResult {
    let (regime, param) = match (regime, eps, alpha) {
        (RegimeArg::Small, Some(e), None) => (Regime::SmallDeviation, e),
        (RegimeArg::Large, None, Some(a)) => (Regime::LargeDeviation, a),
        (RegimeArg::Small, _, _) => return Err(Failure::Usage("--regime small takes --eps (and not --alpha)".into())),
        (RegimeArg::Large, _, _) => return Err(Failure::Usage("--regime large takes --alpha (and not --eps)".into())),
    };
    if n % 2 != 0 {
        return Err(Failure::Usage(format!("--n must be even, got {n}")));
    }
    let grid = grid_override()?.map(Grid::new).transpose()?;
    let opts = ConstructionOptions {
        grid,
        ..ConstructionOptions::default()
    };
    let report = extremal::build(regime, param, n, &opts)?;

    let doc = ConstructOutput {
        schema: format!("opuc-lab v{} construction-report", experiments::SCHEMA_VERSION),
        report: &report,
        consistency: report.consistency(),
    };
    let mut json = serde_json::to_string_pretty(&doc).expect("report serializes");
    json.push('\n');
    write(out, "construction-report.json", &json)?;

    let mut weight = csv_header("weight", "theta,sigma,w1");
    let thetas = report.grid.thetas();
    for ((t, s), w) in thetas.iter().zip(report.weight.weight()).zip(report.clipped.weight()) {
        weight.push_str(&format!("{},{},{}\n", format_float(*t), format_float(*s), format_float(*w)));
    }
    write(out, "weight.csv", &weight)?;
    write(out, "poly.csv", &poly_csv(&report.phi))?;

    println!(
        "{} n={} degree={} value_at_one={} sup_norm={} consistency={}",
        regime.name(),
        n,
        report.degree,
        format_float(report.value_at_one),
        format_float(report.sup_norm),
        report.consistency().map_or("n/a".into(), format_float)
    );
    Ok(())
}

fn load_weight(path: &Path) -> Result<MeasureSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let spec = WeightSpecFile::parse(&text).map_err(|e| match e {
        SpecError::Config(m) => Failure::Usage(format!("{}: {m}", path.display())),
        SpecError::Numerical(e) => Failure::Numerical(e.to_string()),
    })?;
    spec.build(grid_override()?).map_err(|e| match e {
        SpecError::Config(m) => Failure::Usage(format!("{}: {m}", path.display())),
        SpecError::Numerical(e) => Failure::Numerical(e.to_string()),
    })
}

const FIXED_POINT_TOL: f64 = 1e-13;
const FIXED_POINT_MAX_ITER: usize = 1_000_000;

/// `γ_j = -conj(Φ_{j+1}(0))` from fixed-point solves of every degree up to `n`.
fn fixed_point_path(m: &MeasureSpec, n: usize) -> Result<(Vec<C64>, ComplexPoly), Failure> {
    if m.min() < 1.0 - 1e-12 {
        return Err(Failure::Usage(format!(
            "fixed-point method needs 1 <= w, weight minimum is {}",
            format_float(m.min())
        )));
    }
    let mut gamma = Vec::with_capacity(n);
    let mut last = ComplexPoly::one();
    for j in 1..=n {
        last = solver::monic_fixed_point(m, j, None, FIXED_POINT_TOL, FIXED_POINT_MAX_ITER)?.monic;
        gamma.push(-last.coeff(0).conj());
    }
    Ok((gamma, last))
}

fn run_opuc(weight: &Path, n: usize, method: Method, out: &Path) -> CmdResult {
    let m = load_weight(weight)?;
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let (gamma, monic) = match method {
        Method::Recursion => {
            let v = opuc::verblunsky_from_measure(&m, n)?;
            let phi = opuc::szego_recursion(&v, n).phi;
            let lead = phi.coeff(n);
            (v.gamma().to_vec(), phi.scale(C64::new(1.0, 0.0) / lead))
        }
        Method::FixedPoint => fixed_point_path(&m, n)?,
    };
    let mut g = csv_header("gamma", "j,re,im");
    for (j, c) in gamma.iter().enumerate() {
        g.push_str(&format!("{j},{},{}\n", format_float(c.re), format_float(c.im)));
    }
    write(out, "gamma.csv", &g)?;
    write(out, "poly.csv", &poly_csv(&monic))?;
    let s = opuc::szego_data(&m)?;
    let mut sz = csv_header("szego", "lambda,big_lambda,outer_at_zero");
    sz.push_str(&format!(
        "{},{},{}\n",
        format_float(s.lambda_w),
        format_float(s.big_lambda_w),
        format_float(s.outer_at_zero())
    ));
    write(out, "szego.csv", &sz)?;
    println!(
        "{} n={n} grid={} max|gamma|={}",
        m.label(),
        m.grid().len(),
        format_float(gamma.iter().map(|c| c.norm()).fold(0.0, f64::max))
    );
    Ok(())
}

fn run_suite(name: &str, config: &str, out: &Path) -> CmdResult {
    if !SUITE_NAMES.contains(&name) {
        return Err(Failure::Usage(format!(
            "unknown suite '{name}', expected one of {}",
            SUITE_NAMES.join(", ")
        )));
    }
    let text = if config == "default" {
        None
    } else {
        Some(fs::read_to_string(config).map_err(|e| Failure::Usage(format!("{config}: {e}")))?)
    };
    let result = experiments::run_named_suite(name, text.as_deref())?;
    write(out, &format!("{name}.csv"), &result.table.to_csv())?;
    write(out, &format!("{name}-summary.json"), &result.summary_json())?;
    if let Some(plot) = &result.plot {
        write(out, &format!("{name}.svg"), &svg::render(plot))?;
    }
    for c in &result.checks {
        println!("{} {} {} {}", c.status, c.name, format_float(c.value), c.detail);
    }
    println!(
        "{name}: {} pass, {} fail, {} report",
        result.count(Status::Pass),
        result.count(Status::Fail),
        result.count(Status::Report)
    );
    if result.passed() {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("suite {name} has failing checks")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct { regime, eps, alpha, n, out } => construct(*regime, *eps, *alpha, *n, out),
        Command::Opuc { weight, n, method, out } => run_opuc(weight, *n, *method, out),
        Command::Suite { name, config, out } => run_suite(name, config, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
