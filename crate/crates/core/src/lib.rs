//! Ground states of the semiclassical Chandrasekhar star functional
//!
//! ```text
//! E_c(rho) = int j_mc(rho) - kappa D(rho, rho),   int rho = N,
//! ```
//!
//! at finite speed of light and in the nonrelativistic (Thomas-Fermi,
//! Lane-Emden `n = 3/2`) limit, plus the experiments that measure how the
//! former converges to the latter.
//!
//! The numerical kernels in [`model`] and [`solver`] are generic over
//! [`Scalar`] (`f32` or `f64`); [`study`] works in `f64`. The aliases below
//! fix the common `f64` case.

// `!(x > 0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod solver;
pub mod study;

pub use error::{Result, StarError};
pub use scalar::Scalar;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Params = model::ModelParams<f64>;
pub type Light = model::LightSpeed<f64>;
pub type Profile = model::DensityProfile<f64>;
pub type Solution = solver::StarSolution<f64>;
pub type Config = solver::SolverConfig<f64>;
