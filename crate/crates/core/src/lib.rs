//! Thermal lattice Boltzmann models on regular 1-D lattices.
//!
//! - [`model`]: derive discrete-velocity models by solving one polynomial
//!   equation in the base speed, exactly.
//! - [`equilibrium`]: Taylor and Hermite truncations of the
//!   Maxwell-Boltzmann distribution with exact coefficients.
//! - [`simulator`]: stream-collide BGK solver for the thermal shock tube.
//! - [`riemann`]: exact Riemann solution used as the reference.
//! - [`moments`]: Gaussian, Maxwell-Boltzmann and discrete moments.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod catalog;
pub mod equilibrium;
pub mod error;
pub mod model;
pub mod moments;
pub mod riemann;
pub mod simulator;

pub use error::{Error, Result};
