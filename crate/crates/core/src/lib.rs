//! Orthogonal polynomials on the unit circle: Verblunsky coefficients, Szegő
//! recursions, Bernstein–Szegő approximations, Fourier-projection fixed points
//! and explicit weights whose orthonormal polynomials grow in sup norm.

pub mod error;
pub mod experiments;
pub mod extremal;
pub mod kernels;
pub mod opuc;
pub mod roots;
pub mod solver;
pub mod trig;

pub use error::{OpucError, Result};
pub use trig::{ComplexPoly, Degree, Grid, TrigSeries, C64};
