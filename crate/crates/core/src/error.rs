use thiserror::Error;

pub type Result<T> = std::result::Result<T, OpucError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpucError {
    #[error("polynomial of degree {degree} does not fit the degree context {context}")]
    InvalidContext { degree: usize, context: usize },

    #[error("grid of {points} points aliases bandwidth {bandwidth} (need at least {required})")]
    Aliasing {
        points: usize,
        bandwidth: usize,
        required: usize,
    },

    #[error("grid size {0} is not a power of two")]
    GridNotPowerOfTwo(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fractional power exponent {0} <= -1 gives a divergent coefficient series")]
    DivergentSeries(f64),

    #[error("measure is degenerate: {0}")]
    MeasureDegenerate(String),

    #[error("Verblunsky coefficient {index} has modulus {modulus} (numerically degenerate)")]
    NumericalDegeneracy { index: usize, modulus: f64 },

    #[error("weight is not positive (min sample {0}); log-integral diverges")]
    LogDivergence(f64),

    #[error("point {0} is not inside the open unit disk")]
    OutsideDisk(f64),

    #[error("weights disagree on the localization arc (max difference {0})")]
    AgreementViolated(f64),

    #[error("fixed-point iteration did not converge after {iterations} iterations (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("trigonometric polynomial is not strictly positive on the grid (min {min}, max {max})")]
    NotPositive { min: f64, max: f64 },

    #[error("spectral factorization failed: residual {0:e}")]
    FactorizationFailed(f64),

    #[error("construction violated: {0}")]
    ConstructionViolated(String),

    #[error("arcs overlap or exceed the circle: {0}")]
    OverlappingArcs(String),
}
