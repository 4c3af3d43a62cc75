use crate::error::{Result, StarError};
use crate::model::{multiplier_residual, virial_residual, LightSpeed, ModelParams};
use crate::roots::{brent, RootTolerance};
use crate::scalar::{lit, Scalar};
use crate::solver::config::{Backend, SolverConfig};
use crate::solver::picard::picard_solve;
use crate::solver::shoot::{shoot_mass, shoot_profile, Shot};
use crate::solver::solution::{SolveStats, StarSolution};

/// Lane-Emden `n = 3/2` mass coefficient `-xi^2 theta'(xi_1)`.
const LANE_EMDEN_MASS: f64 = 2.71406;
/// Above this central `eta / (m c)` a finite-c star is treated as collapsed.
const COLLAPSE_MOMENTUM: f64 = 1e7;

/// Central potential of the limit star of mass `n`, used as a starting guess.
pub(crate) fn limit_central_potential<T: Scalar>(params: &ModelParams<T>, n: T) -> T {
    let (m, q, kappa) = (params.m(), params.q(), params.kappa());
    let pi = T::PI();
    let stiffness = lit::<T>(4.0) * pi * kappa * q / (lit::<T>(6.0) * pi * pi) * (lit::<T>(2.0) * m).powf(lit(1.5));
    (n * kappa * stiffness.sqrt() / lit(LANE_EMDEN_MASS)).powf(lit(4.0 / 3.0))
}

fn central_momentum<T: Scalar>(params: &ModelParams<T>, u0: T) -> Option<T> {
    let c = params.c().finite()?;
    let m = params.m();
    Some((u0 * u0 / (c * c) + lit::<T>(2.0) * m * u0).sqrt() / (m * c))
}

/// Central potential whose star has mass `n`, and the number of shots used.
pub fn central_potential_for_mass<T: Scalar>(
    params: &ModelParams<T>,
    n: T,
    config: &SolverConfig<T>,
) -> Result<(T, usize)> {
    if !(n > T::zero() && n.is_finite()) {
        return Err(StarError::Domain(format!("target mass must be positive, got {n}")));
    }
    config.validate()?;
    let target = n.ln();
    let mut shots = 0usize;
    let mut largest = T::zero();
    let mut eval = |x: T| -> Result<T> {
        shots += 1;
        let (mass, _) = shoot_mass(params, x.exp(), config)?;
        largest = largest.max(mass);
        Ok(mass.ln() - target)
    };
    let step = lit::<T>(4.0).ln();
    let mut guess = limit_central_potential(params, n);
    if let Some(c) = params.c().finite() {
        // Deep in the relativistic regime the limit guess is meaningless.
        guess = guess.min(lit::<T>(10.0) * params.m() * c * c);
    }
    let mut x0 = guess.ln();
    let mut f0 = eval(x0)?;
    let (lo, hi, flo, fhi) = if f0 < T::zero() {
        loop {
            let x1 = x0 + step;
            let f1 = eval(x1)?;
            if f1 >= T::zero() {
                break (x0, x1, f0, f1);
            }
            if let LightSpeed::Finite(_) = params.c() {
                let stalled = f1 - f0 <= lit::<T>(1e-13);
                let collapsed = central_momentum(params, x1.exp()).is_some_and(|s| s > lit(COLLAPSE_MOMENTUM));
                if stalled || collapsed {
                    return Err(StarError::CriticalMassExceeded {
                        target: n.as_f64(),
                        largest_mass: largest.as_f64(),
                    });
                }
            } else if x1 > lit(700.0) {
                return Err(StarError::Bracket(format!("no central potential reaches mass {n}")));
            }
            x0 = x1;
            f0 = f1;
        }
    } else {
        loop {
            let x1 = x0 - step;
            let f1 = eval(x1)?;
            if f1 <= T::zero() {
                break (x1, x0, f1, f0);
            }
            if x1 < lit(-700.0) {
                return Err(StarError::Bracket(format!("no central potential reaches mass {n}")));
            }
            x0 = x1;
            f0 = f1;
        }
    };
    let tol = RootTolerance {
        x_abs: config.mass_tol * lit(1e-3),
        f_abs: config.mass_tol * lit(1e-2),
        max_iterations: 200,
    };
    let root = brent(&mut eval, lo, hi, flo, fhi, tol)?;
    Ok((root.x.exp(), shots))
}

pub(crate) fn solution_from_shot<T: Scalar>(
    params: &ModelParams<T>,
    shot: Shot<T>,
    shots: usize,
) -> Result<StarSolution<T>> {
    let kappa = params.kappa();
    let mu = kappa * shot.mass / shot.radius;
    let virial = virial_residual(&shot.profile, params)?;
    let multiplier = multiplier_residual(&shot.profile, params, mu, shot.radius)?;
    Ok(StarSolution {
        params: *params,
        central_potential: shot.boundary.central_potential,
        mass: shot.mass,
        mu,
        radius: shot.radius,
        kinetic_energy: shot.kinetic_energy,
        coulomb_energy: shot.coulomb_energy,
        total_energy: shot.kinetic_energy - kappa * shot.coulomb_energy,
        kinetic_moment: shot.kinetic_moment,
        virial_residual: virial,
        multiplier_residual: multiplier,
        boundary_residual: (shot.central_multiplier - mu).abs() / mu,
        backend: Backend::Shoot,
        stats: SolveStats {
            iterations: shots,
            ode_steps: shot.accepted_steps,
            rejected_steps: shot.rejected_steps,
            rhs_evaluations: shot.evaluations,
            step_radii: shot.step_radii,
        },
        profile: shot.profile,
        potential: shot.potential,
    })
}

/// Minimizer of mass `n` by shooting with an outer Brent solve on `ln u0`.
pub fn shoot_solve<T: Scalar>(params: &ModelParams<T>, n: T, config: &SolverConfig<T>) -> Result<StarSolution<T>> {
    let (u0, shots) = central_potential_for_mass(params, n, config)?;
    let shot = shoot_profile(params, u0, config)?;
    let mut solution = solution_from_shot(params, shot, shots + 1)?;
    solution.backend = Backend::Shoot;
    Ok(solution)
}

/// Minimizer of mass `n` with the backend selected in `config`.
pub fn solve_star<T: Scalar>(params: &ModelParams<T>, n: T, config: &SolverConfig<T>) -> Result<StarSolution<T>> {
    config.validate()?;
    match config.backend {
        Backend::Shoot => shoot_solve(params, n, config),
        Backend::Picard => picard_solve(params, n, config),
        Backend::Both => {
            let shot = shoot_solve(params, n, config)?;
            let fixed = picard_solve(params, n, config)?;
            let cmp = compare_backends(&shot, &fixed, config)?;
            if !cmp.within(config.backend_tol) {
                return Err(StarError::BackendMismatch(cmp.to_string()));
            }
            let mut out = shot;
            out.backend = Backend::Both;
            Ok(out)
        }
    }
}

/// Relative differences between two solutions of the same problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackendComparison<T> {
    /// `max |rho_a - rho_b| / max rho_a` on the second solution's grid.
    pub density: T,
    pub mu: T,
    pub radius: T,
    pub energy: T,
}

impl<T: Scalar> BackendComparison<T> {
    /// Scalar observables within `tol`, density within `100 tol`.
    pub fn within(&self, tol: T) -> bool {
        self.density <= tol * lit(100.0) && self.mu <= tol && self.radius <= tol && self.energy <= tol
    }
}

impl<T: Scalar> std::fmt::Display for BackendComparison<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "density {:e}, mu {:e}, radius {:e}, energy {:e}",
            self.density, self.mu, self.radius, self.energy
        )
    }
}

/// Compares a shooting solution with another solution. The shot is re-run on
/// the other solution's grid so that densities are compared node by node.
pub fn compare_backends<T: Scalar>(
    shot: &StarSolution<T>,
    other: &StarSolution<T>,
    config: &SolverConfig<T>,
) -> Result<BackendComparison<T>> {
    let resampled = crate::solver::shoot::shoot_profile_on(
        &shot.params,
        shot.central_potential,
        other.profile.grid().to_vec(),
        config,
    )?;
    let scale = resampled.profile.central_density();
    let density = resampled
        .profile
        .values()
        .iter()
        .zip(other.profile.values())
        .map(|(&a, &b)| (a - b).abs())
        .fold(T::zero(), T::max)
        / scale;
    let rel = |a: T, b: T| ((a - b) / a).abs();
    Ok(BackendComparison {
        density,
        mu: rel(shot.mu, other.mu),
        radius: rel(shot.radius, other.radius),
        energy: rel(shot.total_energy, other.total_energy),
    })
}
