//! Correlations of the divisor function along affine-linear systems: local
//! densities, singular products, a pseudorandom majorant, the W-trick and a
//! deterministic lattice correlation engine.

pub mod affine;
pub mod arith;
pub mod engine;
pub mod error;
pub mod local;
pub mod majorant;
pub mod params;
pub mod summation;
pub mod wtrick;

pub use error::{Error, Result};
