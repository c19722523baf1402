//! Homological stabilizer codes on finite cell complexes.
//!
//! The crate builds signed cell complexes, computes their homology exactly,
//! turns them into qudit stabilizer codes, checks those codes against a dense
//! simulation, analyses errors, and handles the obstruction-class variant
//! built from a twisted bundle over a base complex.

pub mod analysis;
pub mod complex;
pub mod error;
pub mod homology;
pub mod matrix;
pub mod obstruction;
pub mod sim;
pub mod stabilizer;

pub use error::{Error, Result};
