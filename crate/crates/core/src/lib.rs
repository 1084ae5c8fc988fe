//! Ordinary state-based peridynamics for impact on wet concrete.
//!
//! The crate builds a three-phase mesoscale target (aggregate, mortar and
//! interfacial transition zone) on a uniform grid, derives porous and
//! water-saturated moduli, and integrates the target together with a rigid
//! projectile in time.

pub mod constitutive;
pub mod contact;
pub mod error;
pub mod failure;
pub mod homogenization;
pub mod mesostructure;
pub mod rng;
pub mod scenarios;
pub mod solver;
pub mod vector;

pub use error::{Error, Result};
