//! Minimizers of the star functional at fixed mass.
//!
//! Two independent backends: shooting on the radial Poisson equation for
//! `u = kappa V - mu`, and a damped fixed-point iteration of the
//! Euler-Lagrange map. [`solve_star`] dispatches on [`SolverConfig::backend`].

pub mod config;
pub mod picard;
pub mod scaling;
pub mod shoot;
pub mod solution;
pub mod solve;

pub use config::{Backend, SolverConfig};
pub use picard::{picard_solve, picard_solve_from};
pub use scaling::{limit_rescale, verify_c_scaling};
pub use shoot::{natural_length, shoot_mass, shoot_profile, shoot_profile_on, ShootingState, Shot};
pub use solution::{SolveStats, StarSolution};
pub use solve::{central_potential_for_mass, compare_backends, shoot_solve, solve_star, BackendComparison};
