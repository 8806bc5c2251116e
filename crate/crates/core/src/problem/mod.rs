//! Coefficient fields and right-hand sides of the model problems.

mod coeff1d;
mod coeff2d;
mod rhs;

pub use coeff1d::{Case1d, PiecewiseConstantCoeff1D, DOMAIN_1D};
pub use coeff2d::{AnalyticCoeff2D, Coefficient2d, FnCoefficient, RandomSines, MINGYUE_SCALES};
pub use rhs::Rhs1D;
