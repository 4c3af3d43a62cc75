use std::fmt;
use std::str::FromStr;

use crate::error::{Result, StarError};
use crate::scalar::{lit, Scalar};

/// Which minimizer computation to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Radial ODE shooting on the central potential.
    Shoot,
    /// Damped fixed-point iteration of the Euler-Lagrange map.
    Picard,
    /// Both, cross-checked; the shooting result is returned.
    Both,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Shoot => "shoot",
            Backend::Picard => "picard",
            Backend::Both => "both",
        })
    }
}

impl FromStr for Backend {
    type Err = StarError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shoot" => Ok(Backend::Shoot),
            "picard" => Ok(Backend::Picard),
            "both" => Ok(Backend::Both),
            other => Err(StarError::Config(format!("unknown backend {other:?}"))),
        }
    }
}

/// Numerical settings shared by both backends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub backend: Backend,
    pub ode_rtol: T,
    pub ode_atol: T,
    /// Boundary event tolerance on `u`, relative to the central potential.
    pub event_tol: T,
    /// Relative tolerance of the outer mass solve.
    pub mass_tol: T,
    pub picard_damping: T,
    pub picard_max_iterations: usize,
    /// Stop when successive iterates differ by this much relative to `max rho`.
    pub picard_tol: T,
    pub output_nodes: usize,
    pub max_ode_steps: usize,
    /// Largest tolerated relative disagreement in `(mu, R, E)` for
    /// [`Backend::Both`]; the density is held to `100` times this.
    pub backend_tol: T,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            backend: Backend::Shoot,
            ode_rtol: lit(1e-11),
            ode_atol: lit(1e-13),
            event_tol: lit(1e-12),
            mass_tol: lit(1e-10),
            picard_damping: lit(0.5),
            picard_max_iterations: 500,
            picard_tol: lit(1e-10),
            output_nodes: 4001,
            max_ode_steps: 200_000,
            backend_tol: lit(1e-8),
        }
    }
}

impl<T: Scalar> SolverConfig<T> {
    pub fn with_backend(self, backend: Backend) -> Self {
        Self { backend, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ode_rtol", self.ode_rtol),
            ("ode_atol", self.ode_atol),
            ("event_tol", self.event_tol),
            ("mass_tol", self.mass_tol),
            ("picard_tol", self.picard_tol),
            ("backend_tol", self.backend_tol),
        ];
        for (name, v) in positive {
            if !(v > T::zero() && v.is_finite()) {
                return Err(StarError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.picard_damping > T::zero() && self.picard_damping <= T::one()) {
            return Err(StarError::Config(format!(
                "picard_damping must lie in (0, 1], got {}",
                self.picard_damping
            )));
        }
        if self.output_nodes < 16 {
            return Err(StarError::Config(format!(
                "output_nodes must be at least 16, got {}",
                self.output_nodes
            )));
        }
        if self.picard_max_iterations == 0 || self.max_ode_steps == 0 {
            return Err(StarError::Config("iteration limits must be positive".into()));
        }
        Ok(())
    }

    /// Rejects settings too coarse to resolve a `c^-2` signal at `c_max`:
    /// the ODE and mass tolerances must stay below `1e-3 c_max^-2`.
    pub fn validate_for_ladder(&self, c_max: T) -> Result<()> {
        self.validate()?;
        let budget = lit::<T>(1e-3) / (c_max * c_max);
        let worst = self.ode_rtol.max(self.mass_tol);
        if worst > budget {
            return Err(StarError::Config(format!(
                "tolerance {worst:e} cannot resolve differences of order c^-2 at c = {c_max}; need at most {budget:e}"
            )));
        }
        Ok(())
    }
}
