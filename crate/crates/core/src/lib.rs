//! Exact finite free probability.
//!
//! Monic polynomials of degree `d` are held by their signed elementary
//! symmetric coefficients. Everything is exact rational arithmetic.

pub mod annular;
pub mod asymptotics;
pub mod census;
pub mod dpoly;
pub mod error;
pub mod families;
pub mod ffpoly;
pub mod identity;
pub mod limits;
pub mod partitions;
pub mod permutations;
pub mod random;
pub mod rational;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
