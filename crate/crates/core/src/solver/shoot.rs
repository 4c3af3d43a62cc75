//! Shooting on the central potential.
//!
//! Inside the star `u = kappa V - mu` solves `(r^2 u')' = -4 pi kappa r^2 rho(u)`
//! with `rho(u) = g(u_+)` the inverse dispersion. Integrating outward from
//! `u(0) = u0`, the first zero of `u` is the free boundary `R`, and matching to
//! the exterior law `u = kappa N / r - mu` gives `N = -R^2 u'(R) / kappa`.
//! Mass, kinetic energy, `int rho^(5/3)`, `V(0)` and `D(rho, rho)` are carried
//! as auxiliary components so that they share the ODE accuracy.

use crate::error::{Result, StarError};
use crate::model::{density_from_potential, kinetic_density, DensityProfile, ModelParams};
use crate::ode::{self, StepControl, ZeroCrossing};
use crate::quadrature::uniform_grid;
use crate::scalar::{lit, Scalar};
use crate::solver::config::SolverConfig;

const U: usize = 0;
const DU: usize = 1;
const MASS: usize = 2;
const KINETIC: usize = 3;
const MOMENT: usize = 4;
const CENTRAL: usize = 5;
const COULOMB: usize = 6;
const DIM: usize = 7;

/// Potential, slope and radius along a shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingState<T> {
    pub r: T,
    pub u: T,
    pub du: T,
    pub central_potential: T,
}

/// Result of one shot with a fixed central potential.
#[derive(Debug, Clone, PartialEq)]
pub struct Shot<T> {
    pub profile: DensityProfile<T>,
    /// `u` on the profile grid.
    pub potential: Vec<T>,
    pub radius: T,
    pub mass: T,
    /// State at the free boundary.
    pub boundary: ShootingState<T>,
    /// `kappa V(0) - u0`, an independent estimate of `mu`.
    pub central_multiplier: T,
    pub kinetic_energy: T,
    pub coulomb_energy: T,
    pub kinetic_moment: T,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
    pub step_radii: Vec<T>,
}

/// `sqrt(u0 / (4 pi kappa rho(u0)))`, the length over which the central
/// potential changes by order one. In the limit it is the Lane-Emden unit.
pub fn natural_length<T: Scalar>(params: &ModelParams<T>, u0: T) -> T {
    let rho0 = density_from_potential(u0, params);
    (u0 / (lit::<T>(4.0) * T::PI() * params.kappa() * rho0)).sqrt()
}

struct Boundary<T> {
    radius: T,
    y: [T; DIM],
    accepted: usize,
    rejected: usize,
    evaluations: usize,
}

/// Leading even Taylor terms of the regular solution at small `r`.
fn series_state<T: Scalar>(params: &ModelParams<T>, u0: T, r: T) -> [T; DIM] {
    let pi = T::PI();
    let kappa = params.kappa();
    let rho0 = density_from_potential(u0, params);
    let j0 = kinetic_density(rho0, params);
    let r2 = r * r;
    let r3 = r2 * r;
    let third = lit::<T>(4.0) / lit::<T>(3.0) * pi * r3;
    [
        u0 - lit::<T>(2.0) / lit::<T>(3.0) * pi * kappa * rho0 * r2,
        -lit::<T>(4.0) / lit::<T>(3.0) * pi * kappa * rho0 * r,
        third * rho0,
        third * j0,
        third * rho0.powf(lit(5.0 / 3.0)),
        lit::<T>(2.0) * pi * rho0 * r2,
        lit::<T>(16.0) / lit::<T>(15.0) * pi * pi * rho0 * rho0 * r3 * r2,
    ]
}

fn integrate_star<T: Scalar>(
    params: &ModelParams<T>,
    u0: T,
    config: &SolverConfig<T>,
    nodes: &[T],
    mut on_node: impl FnMut(usize, &[T; DIM]),
    mut on_step: impl FnMut(T),
) -> Result<Boundary<T>> {
    if !(u0 > T::zero() && u0.is_finite()) {
        return Err(StarError::Domain(format!(
            "central potential must be positive, got {u0}"
        )));
    }
    let a = natural_length(params, u0);
    let r_start = lit::<T>(1e-6) * a;
    let r_guard = lit::<T>(100.0) * a;
    let four_pi = lit::<T>(4.0) * T::PI();
    let kappa = params.kappa();
    let rhs = |r: T, y: &[T; DIM]| -> [T; DIM] {
        let rho = density_from_potential(y[U], params);
        let mut dy = [T::zero(); DIM];
        dy[U] = y[DU];
        dy[DU] = -lit::<T>(2.0) * y[DU] / r - four_pi * kappa * rho;
        if rho > T::zero() {
            let shell = four_pi * r * r;
            dy[MASS] = shell * rho;
            dy[KINETIC] = shell * kinetic_density(rho, params);
            dy[MOMENT] = shell * rho.powf(lit(5.0 / 3.0));
            dy[CENTRAL] = four_pi * r * rho;
            dy[COULOMB] = four_pi * r * rho * y[MASS];
        }
        dy
    };
    let y0 = series_state(params, u0, r_start);
    for (i, &r) in nodes.iter().enumerate() {
        if r > r_start {
            break;
        }
        on_node(i, &series_state(params, u0, r));
    }
    let ctl = StepControl {
        rtol: config.ode_rtol,
        atol: config.ode_atol,
        max_steps: config.max_ode_steps,
    };
    let event = ZeroCrossing {
        component: U,
        tolerance: config.event_tol * u0,
    };
    let out = ode::integrate(
        &rhs,
        r_start,
        y0,
        lit::<T>(1e-3) * a,
        r_guard,
        &ctl,
        Some(event),
        nodes,
        |i, _, y| on_node(i, y),
        &mut on_step,
    )?;
    if !out.hit_event {
        return Err(StarError::NoBoundary {
            radius: r_guard.as_f64(),
            central_potential: u0.as_f64(),
        });
    }
    Ok(Boundary {
        radius: out.r,
        y: out.y,
        accepted: out.accepted_steps,
        rejected: out.rejected_steps,
        evaluations: out.evaluations,
    })
}

/// Mass `N(u0)` and radius of the star with central potential `u0`, without
/// sampling a profile. This is the inner loop of the outer mass solve.
pub fn shoot_mass<T: Scalar>(params: &ModelParams<T>, u0: T, config: &SolverConfig<T>) -> Result<(T, T)> {
    let b = integrate_star(params, u0, config, &[], |_, _| {}, |_| {})?;
    Ok((-b.radius * b.radius * b.y[DU] / params.kappa(), b.radius))
}

/// Shoots from `u0` and samples the profile on a uniform grid over
/// `[0, 1.05 R]` with `config.output_nodes` nodes.
pub fn shoot_profile<T: Scalar>(params: &ModelParams<T>, u0: T, config: &SolverConfig<T>) -> Result<Shot<T>> {
    config.validate()?;
    let (_, radius) = shoot_mass(params, u0, config)?;
    let grid = uniform_grid(lit::<T>(1.05) * radius, config.output_nodes);
    shoot_profile_on(params, u0, grid, config)
}

/// Shoots from `u0` and samples the profile on the given grid, which must
/// start at 0 and be strictly increasing. Nodes beyond the free boundary get
/// zero density and the exterior potential.
pub fn shoot_profile_on<T: Scalar>(
    params: &ModelParams<T>,
    u0: T,
    grid: Vec<T>,
    config: &SolverConfig<T>,
) -> Result<Shot<T>> {
    let n = grid.len();
    let mut potential = vec![T::nan(); n];
    let mut density = vec![T::zero(); n];
    let mut hit = 0usize;
    let mut step_radii = Vec::new();
    let b = integrate_star(
        params,
        u0,
        config,
        &grid,
        |i, y| {
            potential[i] = y[U];
            density[i] = density_from_potential(y[U], params);
            hit = hit.max(i + 1);
        },
        |r| step_radii.push(r),
    )?;
    let kappa = params.kappa();
    let radius = b.radius;
    let mass = -radius * radius * b.y[DU] / kappa;
    let mu = kappa * mass / radius;
    for i in hit..n {
        potential[i] = kappa * mass / grid[i] - mu;
        density[i] = T::zero();
    }
    // The located boundary may sit a rounding step past a node with u ~ 0.
    for (d, &r) in density.iter_mut().zip(&grid) {
        if r >= radius {
            *d = T::zero();
        }
    }
    let profile = DensityProfile::with_support(grid, density, radius)?;
    Ok(Shot {
        profile,
        potential,
        radius,
        mass,
        boundary: ShootingState {
            r: radius,
            u: b.y[U],
            du: b.y[DU],
            central_potential: u0,
        },
        central_multiplier: kappa * b.y[CENTRAL] - u0,
        kinetic_energy: b.y[KINETIC],
        coulomb_energy: b.y[COULOMB],
        kinetic_moment: b.y[MOMENT],
        accepted_steps: b.accepted,
        rejected_steps: b.rejected,
        evaluations: b.evaluations,
        step_radii,
    })
}
