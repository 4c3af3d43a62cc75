use crate::error::{Result, StarError};
use crate::model::{density_from_potential, multiplier_residual, DensityProfile, ModelParams};
use crate::quadrature::interpolate_cubic;
use crate::scalar::Scalar;
use crate::solver::config::Backend;

/// Work counters of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats<T> {
    /// Outer mass-solve evaluations (shooting) or sweeps (fixed point).
    pub iterations: usize,
    pub ode_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    /// Radii of the accepted adaptive steps of the final shot.
    pub step_radii: Vec<T>,
}

/// A computed minimizer with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct StarSolution<T> {
    pub params: ModelParams<T>,
    pub profile: DensityProfile<T>,
    /// `u = kappa V - mu` on the profile grid.
    pub potential: Vec<T>,
    pub central_potential: T,
    /// Mass `N` the solution represents.
    pub mass: T,
    pub mu: T,
    pub radius: T,
    pub kinetic_energy: T,
    pub coulomb_energy: T,
    pub total_energy: T,
    /// `int rho^(5/3)`.
    pub kinetic_moment: T,
    pub virial_residual: T,
    pub multiplier_residual: T,
    pub boundary_residual: T,
    pub backend: Backend,
    pub stats: SolveStats<T>,
}

impl<T: Scalar> StarSolution<T> {
    pub fn sup_density(&self) -> T {
        self.profile.central_density()
    }

    /// Density at any radius, from the interpolated potential.
    pub fn density_at(&self, r: T) -> T {
        if r >= self.radius {
            return T::zero();
        }
        let u = interpolate_cubic(self.profile.grid(), &self.potential, r.max(T::zero()));
        density_from_potential(u, &self.params)
    }

    /// Potential `u` at any radius; exact exterior law beyond the grid.
    pub fn potential_at(&self, r: T) -> T {
        let grid = self.profile.grid();
        if r >= *grid.last().unwrap() && r > T::zero() {
            return self.params.kappa() * self.mass / r - self.mu;
        }
        interpolate_cubic(grid, &self.potential, r.max(T::zero()))
    }

    /// Copy with a different multiplier and the multiplier diagnostics
    /// recomputed; useful for probing residual sensitivity.
    pub fn with_mu(&self, mu: T) -> Result<Self> {
        if !(mu > T::zero()) {
            return Err(StarError::Domain(format!("multiplier must be positive, got {mu}")));
        }
        let mut out = self.clone();
        out.mu = mu;
        out.multiplier_residual = multiplier_residual(&self.profile, &self.params, mu, self.radius)?;
        out.boundary_residual = (mu - self.params.kappa() * self.mass / self.radius).abs() / mu;
        Ok(out)
    }

    /// Virial residual relative to the kinetic energy.
    pub fn relative_virial_residual(&self) -> T {
        (self.virial_residual / self.kinetic_energy).abs()
    }
}
