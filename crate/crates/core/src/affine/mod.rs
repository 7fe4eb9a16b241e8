//! Affine-linear systems and the convex bodies they are summed over.

mod body;
mod system;

pub use body::{check_range, ConvexBody, LatticeRow, Polytope, VolumeEstimate};
pub use system::{small_primes, AffineForm, AffineSystem, SystemSpec};
