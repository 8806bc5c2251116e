//! Two-scale upscaling with local cell problems: a 1D exact-solution
//! pipeline and a 2D P1 finite element pipeline with averaged tensors
//! and first-order correctors.

pub mod error;
pub mod fem2d;
pub mod harness;
pub mod homog1d;
pub mod metrics;
pub mod problem;
pub mod rng;
pub mod upscale2d;

pub use error::{Error, Result};
