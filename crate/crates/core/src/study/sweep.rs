use std::fmt;

use rayon::prelude::*;

use crate::error::{Result, StarError};
use crate::model::{LightSpeed, ModelParams};
use crate::solver::{limit_rescale, solve_star, SolverConfig, StarSolution};
use crate::study::fit::{fit_power_law, RateFit};

type Params = ModelParams<f64>;
type Solution = StarSolution<f64>;

/// Largest tolerated relative discrepancy of `R_inf - R_c = (mu_c - mu_inf) kappa N / (mu_c mu_inf)`.
pub const RADIUS_IDENTITY_TOL: f64 = 1e-6;

/// Outcome of one ladder point.
#[derive(Debug, Clone, PartialEq)]
pub enum RecordStatus {
    Ok,
    /// Solved, but the radius/multiplier identity failed.
    IdentityFailed,
    Failed(String),
}

impl RecordStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RecordStatus::Ok)
    }
}

impl fmt::Display for RecordStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecordStatus::Ok => f.write_str("ok"),
            RecordStatus::IdentityFailed => f.write_str("identity_failed"),
            RecordStatus::Failed(msg) => write!(f, "failed: {msg}"),
        }
    }
}

/// One `(c, N)` point of a sweep. Deltas are taken against the limit star of
/// the same mass and are absent where no comparison applies.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub c: LightSpeed<f64>,
    pub n: f64,
    pub total_energy: f64,
    pub kinetic_moment: f64,
    pub mu: f64,
    pub radius: f64,
    pub sup_density: f64,
    /// `E_inf - E_c`
    pub d_energy: Option<f64>,
    /// `int rho_c^(5/3) - int rho_inf^(5/3)`
    pub d_kinetic: Option<f64>,
    /// `mu_c - mu_inf`
    pub d_mu: Option<f64>,
    /// `R_inf - R_c`
    pub d_radius: Option<f64>,
    /// Relative discrepancy of the radius/multiplier identity.
    pub radius_identity: Option<f64>,
    pub virial_residual: f64,
    pub multiplier_residual: f64,
    pub boundary_residual: f64,
    pub status: RecordStatus,
}

impl SweepRecord {
    fn from_solution(s: &Solution) -> Self {
        Self {
            c: s.params.c(),
            n: s.mass,
            total_energy: s.total_energy,
            kinetic_moment: s.kinetic_moment,
            mu: s.mu,
            radius: s.radius,
            sup_density: s.sup_density(),
            d_energy: None,
            d_kinetic: None,
            d_mu: None,
            d_radius: None,
            radius_identity: None,
            virial_residual: s.relative_virial_residual(),
            multiplier_residual: s.multiplier_residual,
            boundary_residual: s.boundary_residual,
            status: RecordStatus::Ok,
        }
    }

    fn failed(c: LightSpeed<f64>, n: f64, err: &StarError) -> Self {
        Self {
            c,
            n,
            total_energy: f64::NAN,
            kinetic_moment: f64::NAN,
            mu: f64::NAN,
            radius: f64::NAN,
            sup_density: f64::NAN,
            d_energy: None,
            d_kinetic: None,
            d_mu: None,
            d_radius: None,
            radius_identity: None,
            virial_residual: f64::NAN,
            multiplier_residual: f64::NAN,
            boundary_residual: f64::NAN,
            status: RecordStatus::Failed(err.to_string()),
        }
    }

    fn with_deltas(mut self, s: &Solution, limit: &Solution) -> Self {
        let kappa = s.params.kappa();
        let d_radius = limit.radius - s.radius;
        let predicted = (s.mu - limit.mu) * kappa * s.mass / (s.mu * limit.mu);
        let identity = ((d_radius - predicted) / d_radius).abs();
        self.d_energy = Some(limit.total_energy - s.total_energy);
        self.d_kinetic = Some(s.kinetic_moment - limit.kinetic_moment);
        self.d_mu = Some(s.mu - limit.mu);
        self.d_radius = Some(d_radius);
        self.radius_identity = Some(identity);
        if !(identity <= RADIUS_IDENTITY_TOL) {
            self.status = RecordStatus::IdentityFailed;
        }
        self
    }

    pub fn c_value(&self) -> f64 {
        self.c.finite().unwrap_or(f64::INFINITY)
    }
}

/// Quantity a rate is fitted to, with its abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observable {
    DeltaEnergy,
    DeltaKinetic,
    DeltaMu,
    DeltaRadius,
    SupDensity,
    Radius,
    Mu,
}

impl Observable {
    pub const DELTAS: [Observable; 4] = [
        Observable::DeltaEnergy,
        Observable::DeltaKinetic,
        Observable::DeltaMu,
        Observable::DeltaRadius,
    ];
    pub const MASS_LAWS: [Observable; 3] = [Observable::SupDensity, Observable::Radius, Observable::Mu];

    pub fn name(self) -> &'static str {
        match self {
            Observable::DeltaEnergy => "dE",
            Observable::DeltaKinetic => "dKin",
            Observable::DeltaMu => "dMu",
            Observable::DeltaRadius => "dR",
            Observable::SupDensity => "sup_density",
            Observable::Radius => "radius",
            Observable::Mu => "mu",
        }
    }

    /// Deltas are fitted against `c`, absolute observables against `N`.
    fn sample(self, r: &SweepRecord) -> (f64, Option<f64>) {
        match self {
            Observable::DeltaEnergy => (r.c_value(), r.d_energy),
            Observable::DeltaKinetic => (r.c_value(), r.d_kinetic),
            Observable::DeltaMu => (r.c_value(), r.d_mu),
            Observable::DeltaRadius => (r.c_value(), r.d_radius),
            Observable::SupDensity => (r.n, Some(r.sup_density)),
            Observable::Radius => (r.n, Some(r.radius)),
            Observable::Mu => (r.n, Some(r.mu)),
        }
    }
}

/// Power-law fit of one observable over a set of records.
pub fn fit_rate(records: &[SweepRecord], observable: Observable) -> Result<RateFit> {
    let name = observable.name();
    let mut samples = Vec::with_capacity(records.len());
    for r in records {
        let (x, y) = observable.sample(r);
        match (&r.status, y) {
            (RecordStatus::Failed(msg), _) => {
                return Err(StarError::FitDomain(format!(
                    "{name}: point c = {}, N = {} failed ({msg})",
                    r.c, r.n
                )))
            }
            (_, None) => {
                return Err(StarError::FitDomain(format!(
                    "{name}: no value at c = {}, N = {}",
                    r.c, r.n
                )))
            }
            (_, Some(y)) if !(y > 0.0) => {
                return Err(StarError::FitDomain(format!(
                    "{name}: nonpositive value {y:e} at c = {}",
                    r.c
                )))
            }
            (_, Some(y)) => samples.push((x, y)),
        }
    }
    fit_power_law(name, &samples)
}

/// Checks that a ladder is nonempty, finite, positive and strictly increasing.
pub fn validate_ladder(name: &str, ladder: &[f64]) -> Result<()> {
    if ladder.is_empty() {
        return Err(StarError::Config(format!("{name} ladder is empty")));
    }
    if let Some(x) = ladder.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(StarError::Config(format!(
            "{name} ladder entry {x} must be finite and positive"
        )));
    }
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(StarError::Config(format!("{name} ladder must be strictly increasing")));
    }
    Ok(())
}

/// A c-ladder sweep at fixed mass.
#[derive(Debug, Clone)]
pub struct CSweep {
    pub limit: Solution,
    /// Finite-c solutions in ladder order; failed points hold the error.
    pub solutions: Vec<Result<Solution>>,
    pub records: Vec<SweepRecord>,
}

impl CSweep {
    pub fn all_ok(&self) -> bool {
        self.records.iter().all(|r| r.status.is_ok())
    }
}

/// Solves the limit star once and every finite-c star of the ladder
/// (concurrently), then fills the deltas in ladder order.
pub fn sweep_c(base: &Params, n: f64, ladder: &[f64], config: &SolverConfig<f64>) -> Result<CSweep> {
    validate_ladder("c", ladder)?;
    config.validate_for_ladder(*ladder.last().unwrap())?;
    let limit = solve_star(&base.limit(), n, config)?;
    let solutions: Vec<Result<Solution>> = ladder
        .par_iter()
        .map(|&c| solve_star(&base.with_c(LightSpeed::Finite(c))?, n, config))
        .collect();
    let records = ladder
        .iter()
        .zip(&solutions)
        .map(|(&c, s)| match s {
            Ok(s) => SweepRecord::from_solution(s).with_deltas(s, &limit),
            Err(e) => SweepRecord::failed(LightSpeed::Finite(c), n, e),
        })
        .collect();
    Ok(CSweep {
        limit,
        solutions,
        records,
    })
}

/// A mass-ladder sweep at fixed `c`.
#[derive(Debug, Clone)]
pub struct NSweep {
    pub records: Vec<SweepRecord>,
    pub solutions: Vec<Result<Solution>>,
    /// Fits of `sup rho`, `R` and `mu` against `N`; absent for ladders too short.
    pub fits: Option<[RateFit; 3]>,
    /// Limit model only: largest relative deviation between each direct
    /// solve and the exact rescaling of the first one (density sup norm,
    /// `mu` and `R`).
    pub rescale_discrepancy: Option<f64>,
}

impl NSweep {
    pub fn all_ok(&self) -> bool {
        self.records.iter().all(|r| r.status.is_ok())
    }
}

fn rescale_discrepancy(direct: &Solution, reference: &Solution) -> Result<f64> {
    let scaled = limit_rescale(reference, direct.mass)?;
    let top = direct.sup_density();
    let density = direct
        .profile
        .grid()
        .iter()
        .map(|&r| (direct.density_at(r) - scaled.density_at(r)).abs() / top)
        .fold(0.0, f64::max);
    let rel = |a: f64, b: f64| ((a - b) / a).abs();
    Ok(density
        .max(rel(direct.mu, scaled.mu))
        .max(rel(direct.radius, scaled.radius))
        .max(rel(direct.total_energy, scaled.total_energy)))
}

/// Solves the mass ladder at `params.c()` and fits the mass laws.
pub fn sweep_n(params: &Params, ladder: &[f64], config: &SolverConfig<f64>) -> Result<NSweep> {
    validate_ladder("N", ladder)?;
    config.validate()?;
    let solutions: Vec<Result<Solution>> = ladder.par_iter().map(|&n| solve_star(params, n, config)).collect();
    let records: Vec<SweepRecord> = ladder
        .iter()
        .zip(&solutions)
        .map(|(&n, s)| match s {
            Ok(s) => SweepRecord::from_solution(s),
            Err(e) => SweepRecord::failed(params.c(), n, e),
        })
        .collect();
    let fits = if ladder.len() >= 3 && records.iter().all(|r| r.status.is_ok()) {
        Some([
            fit_rate(&records, Observable::SupDensity)?,
            fit_rate(&records, Observable::Radius)?,
            fit_rate(&records, Observable::Mu)?,
        ])
    } else {
        None
    };
    let rescale = match (params.c(), solutions.first()) {
        (LightSpeed::Infinite, Some(Ok(first))) => {
            let mut worst: f64 = 0.0;
            for s in solutions.iter().flatten() {
                worst = worst.max(rescale_discrepancy(s, first)?);
            }
            Some(worst)
        }
        _ => None,
    };
    Ok(NSweep {
        records,
        solutions,
        fits,
        rescale_discrepancy: rescale,
    })
}
