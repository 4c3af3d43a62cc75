//! Damped fixed-point iteration `rho <- (1 - tau) rho + tau g([kappa V_rho - mu]_+)`
//! on a uniform grid, with `mu` re-solved every sweep so that each iterate
//! carries the target mass.

use crate::error::{Result, StarError};
use crate::model::{
    density_from_potential, kinetic_moment, multiplier_residual, total_energy, virial_residual, DensityProfile,
    ModelParams,
};
use crate::quadrature::{interpolate_cubic, uniform_grid, CellRule};
use crate::roots::{brent, RootTolerance};
use crate::scalar::{lit, Scalar};
use crate::solver::config::{Backend, SolverConfig};
use crate::solver::shoot::natural_length;
use crate::solver::solution::{SolveStats, StarSolution};
use crate::solver::solve::limit_central_potential;

/// Lane-Emden `n = 3/2` first zero.
const LANE_EMDEN_RADIUS: f64 = 3.65375;

struct Grid<T> {
    r: Vec<T>,
    rule: CellRule<T>,
    shell: Vec<T>,
}

impl<T: Scalar> Grid<T> {
    fn new(r: Vec<T>) -> Self {
        let four_pi = lit::<T>(4.0) * T::PI();
        let shell = r.iter().map(|&x| four_pi * x * x).collect();
        let rule = CellRule::new(&r);
        Self { r, rule, shell }
    }

    fn end(&self) -> T {
        *self.r.last().unwrap()
    }

    fn mass(&self, rho: &[T]) -> T {
        let w: Vec<T> = rho.iter().zip(&self.shell).map(|(&a, &b)| a * b).collect();
        self.rule.integrate(&w)
    }

    /// Newton potential of nodal densities, by the formula at every node.
    fn potential(&self, rho: &[T]) -> Vec<T> {
        let four_pi = lit::<T>(4.0) * T::PI();
        let shell: Vec<T> = rho.iter().zip(&self.shell).map(|(&a, &b)| a * b).collect();
        let weighted: Vec<T> = rho.iter().zip(&self.r).map(|(&a, &r)| four_pi * a * r).collect();
        let inner = self.rule.cumulative(&shell);
        let outer = self.rule.cumulative_from_end(&weighted);
        self.r
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                if r == T::zero() {
                    outer[0]
                } else {
                    inner[i] / r + outer[i]
                }
            })
            .collect()
    }
}

struct Sweep<T> {
    mu: T,
    rho: Vec<T>,
}

/// Multiplier giving the image density mass `n`, and that density.
fn image<T: Scalar>(params: &ModelParams<T>, grid: &Grid<T>, v: &[T], n: T) -> Result<Sweep<T>> {
    let kappa = params.kappa();
    let density = |mu: T| -> Vec<T> {
        v.iter()
            .map(|&x| density_from_potential(kappa * x - mu, params))
            .collect()
    };
    let excess = |mu: T| -> Result<T> { Ok(grid.mass(&density(mu)) / n - T::one()) };
    let hi = kappa * v[0];
    let f_hi = -T::one();
    let span = hi - kappa * *v.last().unwrap();
    let mut lo = hi - span;
    let mut f_lo = excess(lo)?;
    let mut widen = 0;
    while f_lo < T::zero() {
        widen += 1;
        if widen > 60 {
            return Err(StarError::Bracket("no multiplier reaches the target mass".into()));
        }
        lo = lo - span * lit::<T>(2.0).powi(widen);
        f_lo = excess(lo)?;
    }
    let tol = RootTolerance {
        x_abs: T::epsilon() * hi.abs() * lit(4.0),
        f_abs: T::epsilon() * lit(8.0),
        max_iterations: 200,
    };
    let root = brent(excess, lo, hi, f_lo, f_hi, tol)?;
    Ok(Sweep {
        mu: root.x,
        rho: density(root.x),
    })
}

/// Radius where `u` on the grid changes sign, refined on its cubic interpolant.
fn boundary_radius<T: Scalar>(grid: &[T], u: &[T]) -> Option<T> {
    let j = u.iter().position(|&x| x <= T::zero())?;
    if j == 0 {
        return None;
    }
    let (a, b) = (grid[j - 1], grid[j]);
    let f = |r: T| Ok(interpolate_cubic(grid, u, r));
    let tol = RootTolerance {
        x_abs: T::epsilon() * b * lit(4.0),
        f_abs: T::zero(),
        max_iterations: 200,
    };
    brent(f, a, b, u[j - 1], u[j], tol).ok().map(|root| root.x)
}

fn resample<T: Scalar>(params: &ModelParams<T>, from: &[T], u: &[T], n_total: T, mu: T, to: &[T]) -> Vec<T> {
    let end = *from.last().unwrap();
    to.iter()
        .map(|&r| {
            let w = if r <= end {
                interpolate_cubic(from, u, r)
            } else {
                params.kappa() * n_total / r - mu
            };
            density_from_potential(w, params)
        })
        .collect()
}

/// Fixed-point solve from a parabolic initial guess on the limit-star radius.
pub fn picard_solve<T: Scalar>(params: &ModelParams<T>, n: T, config: &SolverConfig<T>) -> Result<StarSolution<T>> {
    if !(n > T::zero() && n.is_finite()) {
        return Err(StarError::Domain(format!("target mass must be positive, got {n}")));
    }
    let u0 = limit_central_potential(params, n);
    let guess = lit::<T>(LANE_EMDEN_RADIUS) * natural_length(&params.limit(), u0);
    let grid = uniform_grid(lit::<T>(1.3) * guess, config.output_nodes);
    let values: Vec<T> = grid
        .iter()
        .map(|&r| {
            let x = r / guess;
            (T::one() - x * x).max(T::zero())
        })
        .collect();
    let shape = DensityProfile::new(grid, values)?;
    let initial = shape.rescaled(n / shape.mass(), T::one())?;
    picard_solve_from(params, n, &initial, config)
}

/// Fixed-point solve started from `initial`, whose grid is kept unless the
/// support outgrows it or ends up far inside it.
pub fn picard_solve_from<T: Scalar>(
    params: &ModelParams<T>,
    n: T,
    initial: &DensityProfile<T>,
    config: &SolverConfig<T>,
) -> Result<StarSolution<T>> {
    config.validate()?;
    if !(n > T::zero() && n.is_finite()) {
        return Err(StarError::Domain(format!("target mass must be positive, got {n}")));
    }
    let kappa = params.kappa();
    let tau = config.picard_damping;
    let nodes = initial.len();
    let mut grid = Grid::new(initial.grid().to_vec());
    let mut rho: Vec<T> = initial.values().to_vec();
    let mut last_change = T::infinity();
    for sweep in 1..=config.picard_max_iterations {
        let v = grid.potential(&rho);
        let next = image(params, &grid, &v, n)?;
        let top = next.rho[0];
        let change = rho
            .iter()
            .zip(&next.rho)
            .map(|(&a, &b)| (a - b).abs())
            .fold(T::zero(), T::max)
            / top;
        last_change = change;
        if *next.rho.last().unwrap() > T::zero() {
            // Support reaches the end of the grid: enlarge and carry on.
            let u: Vec<T> = v.iter().map(|&x| kappa * x - next.mu).collect();
            let wider = uniform_grid(grid.end() * lit(1.5), nodes);
            rho = resample(params, &grid.r, &u, n, next.mu, &wider);
            grid = Grid::new(wider);
            continue;
        }
        if change > config.picard_tol {
            for (a, b) in rho.iter_mut().zip(&next.rho) {
                *a = (T::one() - tau) * *a + tau * *b;
            }
            continue;
        }
        let final_v = grid.potential(&next.rho);
        let u: Vec<T> = final_v.iter().map(|&x| kappa * x - next.mu).collect();
        let radius = boundary_radius(&grid.r, &u).ok_or_else(|| StarError::NonConvergence {
            iterations: sweep,
            residual: change.as_f64(),
        })?;
        let fill = radius / grid.end();
        if fill < lit(0.9) || fill > lit(0.99) {
            let fitted = uniform_grid(radius * lit(1.05), nodes);
            rho = resample(params, &grid.r, &u, n, next.mu, &fitted);
            grid = Grid::new(fitted);
            continue;
        }
        let mut values = next.rho;
        for (x, &r) in values.iter_mut().zip(&grid.r) {
            if r >= radius {
                *x = T::zero();
            }
        }
        let profile = DensityProfile::with_support(grid.r.clone(), values, radius)?;
        return finish(params, n, profile, u, next.mu, radius, sweep);
    }
    Err(StarError::NonConvergence {
        iterations: config.picard_max_iterations,
        residual: last_change.as_f64(),
    })
}

fn finish<T: Scalar>(
    params: &ModelParams<T>,
    n: T,
    profile: DensityProfile<T>,
    potential: Vec<T>,
    mu: T,
    radius: T,
    sweeps: usize,
) -> Result<StarSolution<T>> {
    let energy = total_energy(&profile, params)?;
    let kappa = params.kappa();
    Ok(StarSolution {
        params: *params,
        central_potential: potential[0],
        mass: n,
        mu,
        radius,
        kinetic_energy: energy.kinetic,
        coulomb_energy: energy.coulomb,
        total_energy: energy.total,
        kinetic_moment: kinetic_moment(&profile),
        virial_residual: virial_residual(&profile, params)?,
        multiplier_residual: multiplier_residual(&profile, params, mu, radius)?,
        boundary_residual: (mu - kappa * n / radius).abs() / mu,
        backend: Backend::Picard,
        stats: SolveStats {
            iterations: sweeps,
            ode_steps: 0,
            rejected_steps: 0,
            rhs_evaluations: 0,
            step_radii: Vec::new(),
        },
        profile,
        potential,
    })
}
