//! JSON weight specifications for the `opuc` command.

use std::f64::consts::PI;

use opuc_lab::extremal::{self, ConstructionOptions, Regime};
use opuc_lab::opuc::MeasureSpec;
use opuc_lab::{Grid, OpucError};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpecFile {
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Value,
    pub grid: GridSpec,
    #[serde(default)]
    pub normalize: Normalize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalize {
    #[default]
    None,
    Probability,
    #[serde(rename = "mass-2pi")]
    Mass2Pi,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "kebab-case")]
pub enum WeightKind {
    Constant(ConstantParams),
    Trig(TrigParams),
    SmallDeviation(SmallParams),
    LargeDeviation(LargeParams),
    Clipped(ClippedParams),
    PiecewiseArcs(ArcParams),
    Samples(SampleParams),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantParams {
    pub value: f64,
}

/// `a0 + Σ cos[k-1] cos kθ + sin[k-1] sin kθ`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigParams {
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmallParams {
    pub eps: f64,
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LargeParams {
    pub alpha: f64,
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClippedParams {
    pub regime: String,
    pub param: f64,
    pub n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arc {
    pub center: f64,
    pub half_width: f64,
    pub value: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcParams {
    pub base: f64,
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleParams {
    pub values: Vec<f64>,
}

/// Distance between two angles on the circle.
fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn build_kind(kind: WeightKind, grid: Grid) -> opuc_lab::Result<MeasureSpec> {
    let opts = ConstructionOptions {
        grid: Some(grid),
        splice_check: false,
        ..ConstructionOptions::default()
    };
    match kind {
        WeightKind::Constant(p) => MeasureSpec::from_fn(grid, |_| p.value, "constant"),
        WeightKind::Trig(p) => MeasureSpec::from_fn(
            grid,
            |t| {
                let c: f64 = p.cos.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * t).cos()).sum();
                let s: f64 = p.sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * t).sin()).sum();
                p.a0 + c + s
            },
            "trig",
        ),
        WeightKind::SmallDeviation(p) => {
            Ok(extremal::build(Regime::SmallDeviation, p.eps, p.n, &opts)?.weight)
        }
        WeightKind::LargeDeviation(p) => {
            Ok(extremal::build(Regime::LargeDeviation, p.alpha, p.n, &opts)?.weight)
        }
        WeightKind::Clipped(p) => {
            let regime = match p.regime.as_str() {
                "small" => Regime::SmallDeviation,
                "large" => Regime::LargeDeviation,
                other => {
                    return Err(OpucError::InvalidParameter(format!(
                        "clipped regime must be 'small' or 'large', got '{other}'"
                    )))
                }
            };
            Ok(extremal::build(regime, p.param, p.n, &opts)?.clipped)
        }
        WeightKind::PiecewiseArcs(p) => MeasureSpec::from_fn(
            grid,
            |t| {
                p.arcs
                    .iter()
                    .find(|a| circle_distance(t, a.center) <= a.half_width)
                    .map_or(p.base, |a| a.value)
            },
            "piecewise-arcs",
        ),
        WeightKind::Samples(p) => {
            if p.values.len() != grid.len() {
                return Err(OpucError::InvalidParameter(format!(
                    "samples has {} values for a grid of {}",
                    p.values.len(),
                    grid.len()
                )));
            }
            MeasureSpec::new(grid, p.values, "samples")
        }
    }
}

#[derive(Debug)]
pub enum SpecError {
    /// Malformed or inconsistent document.
    Config(String),
    /// The document is valid but the weight could not be built.
    Numerical(OpucError),
}

impl WeightSpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError::Config(e.to_string()))
    }

    pub fn build(self, grid_override: Option<usize>) -> Result<MeasureSpec, SpecError> {
        let n = grid_override.unwrap_or(self.grid.n);
        let grid = Grid::new(n).map_err(|e| SpecError::Config(e.to_string()))?;
        let doc = serde_json::json!({ "kind": self.kind, "params": self.params });
        let kind: WeightKind =
            serde_json::from_value(doc).map_err(|e| SpecError::Config(e.to_string()))?;
        let m = build_kind(kind, grid).map_err(|e| match e {
            OpucError::InvalidParameter(msg) => SpecError::Config(msg),
            other => SpecError::Numerical(other),
        })?;
        Ok(match self.normalize {
            Normalize::None => m,
            Normalize::Probability => m.probability(),
            Normalize::Mass2Pi => m.scaled(2.0 * PI / m.total_mass()),
        })
    }
}
