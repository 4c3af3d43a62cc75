use crate::error::{Result, StarError};
use crate::model::{multiplier_residual, virial_residual, LightSpeed, ModelParams};
use crate::scalar::{lit, Scalar};
use crate::solver::config::SolverConfig;
use crate::solver::solution::StarSolution;
use crate::solver::solve::solve_star;

/// Maps a limit-model minimizer of mass `N0` to the minimizer of mass `n`:
/// `rho_N(x) = s^2 rho_N0(s^(1/3) x)` with `s = N / N0`.
pub fn limit_rescale<T: Scalar>(solution: &StarSolution<T>, n: T) -> Result<StarSolution<T>> {
    if !solution.params.c().is_infinite() {
        return Err(StarError::UnsupportedModel(
            "exact mass rescaling only exists for the nonrelativistic limit".into(),
        ));
    }
    if !(n > T::zero() && n.is_finite()) {
        return Err(StarError::Domain(format!("target mass must be positive, got {n}")));
    }
    let s = n / solution.mass;
    let length = s.cbrt();
    let energy = s.powf(lit(7.0 / 3.0));
    let potential_scale = s.powf(lit(4.0 / 3.0));
    let profile = solution.profile.rescaled(s * s, length)?;
    let params = solution.params;
    let mu = solution.mu * potential_scale;
    let radius = solution.radius / length;
    Ok(StarSolution {
        params,
        potential: solution.potential.iter().map(|&u| u * potential_scale).collect(),
        central_potential: solution.central_potential * potential_scale,
        mass: n,
        mu,
        radius,
        kinetic_energy: solution.kinetic_energy * energy,
        coulomb_energy: solution.coulomb_energy * energy,
        total_energy: solution.total_energy * energy,
        kinetic_moment: solution.kinetic_moment * energy,
        virial_residual: virial_residual(&profile, &params)?,
        multiplier_residual: multiplier_residual(&profile, &params, mu, radius)?,
        boundary_residual: solution.boundary_residual,
        backend: solution.backend,
        stats: solution.stats.clone(),
        profile,
    })
}

/// Relative residual of `E_{c=1}(c^(-3/2) N) = c^(-7/2) E_c(N)`, solving both
/// problems with the constants of `params`.
pub fn verify_c_scaling<T: Scalar>(params: &ModelParams<T>, n: T, c: T, config: &SolverConfig<T>) -> Result<T> {
    if !(c > T::zero() && c.is_finite()) {
        return Err(StarError::UnsupportedModel(
            "c-scaling needs a finite speed of light".into(),
        ));
    }
    let at_c = solve_star(&params.with_c(LightSpeed::Finite(c))?, n, config)?;
    let unit = solve_star(
        &params.with_c(LightSpeed::Finite(T::one()))?,
        n * c.powf(lit(-1.5)),
        config,
    )?;
    let predicted = at_c.total_energy * c.powf(lit(-3.5));
    Ok(((unit.total_energy - predicted) / predicted).abs())
}
