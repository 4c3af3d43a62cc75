use crate::error::{Result, StarError};
use crate::model::kinetic::{chemical_work_density, kinetic_density, virial_density};
use crate::model::params::{LightSpeed, ModelParams};
use crate::model::potential::coulomb_energy;
use crate::model::profile::DensityProfile;
use crate::scalar::{lit, Scalar};

/// Energy decomposition of a profile. `total = kinetic - kappa * coulomb`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts<T> {
    pub kinetic: T,
    pub coulomb: T,
    pub total: T,
}

pub fn kinetic_energy<T: Scalar>(profile: &DensityProfile<T>, params: &ModelParams<T>) -> T {
    profile.integrate_density(|rho| kinetic_density(rho, params))
}

pub fn total_energy<T: Scalar>(profile: &DensityProfile<T>, params: &ModelParams<T>) -> Result<EnergyParts<T>> {
    let kinetic = kinetic_energy(profile, params);
    let coulomb = coulomb_energy(profile)?;
    Ok(EnergyParts {
        kinetic,
        coulomb,
        total: kinetic - params.kappa() * coulomb,
    })
}

/// `int rho^(5/3)`.
pub fn kinetic_moment<T: Scalar>(profile: &DensityProfile<T>) -> T {
    profile.moment(lit(5.0 / 3.0))
}

/// Signed residual of the dilation identity,
/// `int j - m^2 c^4 int jbar + m c^2 N - kappa D` (limit: `2 int j - kappa D`).
pub fn virial_residual<T: Scalar>(profile: &DensityProfile<T>, params: &ModelParams<T>) -> Result<T> {
    let v = profile.integrate_density(|rho| virial_density(rho, params));
    Ok(v - params.kappa() * coulomb_energy(profile)?)
}

/// Largest of the normalized residuals of
/// `-mu N = int T(eta) rho - 2 kappa D` and of the boundary law `mu = kappa N / R`.
pub fn multiplier_residual<T: Scalar>(
    profile: &DensityProfile<T>,
    params: &ModelParams<T>,
    mu: T,
    radius: T,
) -> Result<T> {
    let n = profile.mass();
    let d = coulomb_energy(profile)?;
    let work = profile.integrate_density(|rho| chemical_work_density(rho, params));
    let integral = ((-mu * n) - (work - lit::<T>(2.0) * params.kappa() * d)).abs() / (mu * n);
    let boundary = (mu - params.kappa() * n / radius).abs() / mu;
    Ok(integral.max(boundary))
}

/// Bounds on `E_inf(rho) - E_c(rho)` from integrating the dispersion sandwich
/// over the Fermi ball: returns `(sharp, coarse)` with
/// `sharp = 3/(56 m^3 c^2) (6 pi^2/q)^(4/3) int rho^(7/3)` and
/// `coarse = A0^2 / (8 m^3 c^2) int rho^(7/3)`.
pub fn energy_gap_bounds<T: Scalar>(profile: &DensityProfile<T>, params: &ModelParams<T>) -> Result<(T, T)> {
    let c = match params.c() {
        LightSpeed::Finite(c) => c,
        LightSpeed::Infinite => return Err(StarError::UnsupportedModel("energy gap to itself".into())),
    };
    let m = params.m();
    let moment = profile.moment(lit(7.0 / 3.0));
    let scale = params.a0() * params.a0() / (m * m * m * c * c) * moment;
    Ok((lit::<T>(3.0 / 56.0) * scale, lit::<T>(0.125) * scale))
}

/// `K_cl ||rho||_{4/3}^{4/3} ||rho||_1^{2/3} / (kappa D)`. Bounded below by
/// `N_*^{2/3}` for every profile, with `N_*` in units where `c = 1`.
pub fn gns_ratio<T: Scalar>(profile: &DensityProfile<T>, params: &ModelParams<T>) -> Result<T> {
    let d = coulomb_energy(profile)?;
    if !(d > T::zero()) {
        return Err(StarError::Domain(
            "ratio undefined for a profile without self-energy".into(),
        ));
    }
    let n = profile.mass();
    Ok(params.k_cl() * profile.moment(lit(4.0 / 3.0)) * n.powf(lit(2.0 / 3.0)) / (params.kappa() * d))
}

/// Running minimum of [`gns_ratio`], giving a nonincreasing upper estimate
/// of `N_*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnsTracker<T> {
    best: Option<T>,
    seen: usize,
}

impl<T: Scalar> Default for GnsTracker<T> {
    fn default() -> Self {
        Self { best: None, seen: 0 }
    }
}

impl<T: Scalar> GnsTracker<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds in one profile and returns the updated ratio minimum.
    pub fn observe(&mut self, profile: &DensityProfile<T>, params: &ModelParams<T>) -> Result<T> {
        let ratio = gns_ratio(profile, params)?;
        self.seen += 1;
        let best = self.best.map_or(ratio, |b| b.min(ratio));
        self.best = Some(best);
        Ok(best)
    }

    pub fn ratio(&self) -> Option<T> {
        self.best
    }

    /// `ratio^(3/2)`, an upper bound on `N_*`.
    pub fn mass_estimate(&self) -> Option<T> {
        self.best.map(|r| r.powf(lit(1.5)))
    }

    pub fn profiles_seen(&self) -> usize {
        self.seen
    }
}
