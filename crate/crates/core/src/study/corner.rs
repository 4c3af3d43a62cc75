use crate::error::{Result, StarError};
use crate::model::LightSpeed;
use crate::solver::{SolverConfig, StarSolution};
use crate::study::fit::{fit_power_law, RateFit};
use crate::study::sweep::{fit_rate, sweep_c, Observable};

type Params = crate::model::ModelParams<f64>;
type Solution = StarSolution<f64>;

/// Below this many ODE tolerances of `R`, a radius gap is treated as noise.
const NOISE_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerStatus {
    Resolved,
    /// `R_inf - R_c` is below the solver noise floor.
    Inconclusive,
}

/// Densities in and around the annulus `R_c - K1/c^2 < r < R_inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerPoint {
    pub c: f64,
    pub radius_c: f64,
    pub radius_limit: f64,
    /// `R_c - K1 / c^2`.
    pub inner_radius: f64,
    /// `rho_inf(R_c)`.
    pub limit_density_at_edge: f64,
    /// `rho_c(R_c - K1 / c^2)`.
    pub density_at_inner: f64,
    /// `B(R_c - K1/c^2) ⊂ B(R_c) ⊂ B(R_inf)`.
    pub contained: bool,
    pub status: LayerStatus,
}

/// Layer diagnostics of one finite-c solution against the limit solution.
pub fn corner_layer_report(
    solution: &Solution,
    limit: &Solution,
    k1: f64,
    config: &SolverConfig<f64>,
) -> Result<CornerPoint> {
    let c = match solution.params.c() {
        LightSpeed::Finite(c) => c,
        LightSpeed::Infinite => return Err(StarError::UnsupportedModel("corner layer needs finite c".into())),
    };
    if !limit.params.c().is_infinite() {
        return Err(StarError::Domain("reference solution must be the limit star".into()));
    }
    let gap = limit.radius - solution.radius;
    let floor = NOISE_FACTOR * config.ode_rtol * limit.radius;
    let inner = solution.radius - k1 / (c * c);
    Ok(CornerPoint {
        c,
        radius_c: solution.radius,
        radius_limit: limit.radius,
        inner_radius: inner,
        limit_density_at_edge: limit.density_at(solution.radius),
        density_at_inner: solution.density_at(inner),
        contained: inner < solution.radius && solution.radius <= limit.radius,
        status: if gap.abs() < floor {
            LayerStatus::Inconclusive
        } else {
            LayerStatus::Resolved
        },
    })
}

/// Corner-layer study over a c-ladder.
#[derive(Debug, Clone)]
pub struct CornerStudy {
    /// Amplitude of the `R_inf - R_c` power law, used as `K1`.
    pub k1: f64,
    pub radius_fit: RateFit,
    pub points: Vec<CornerPoint>,
    /// Fit of `rho_inf(R_c)` against `c`; absent if any point is unresolved.
    pub decay_fit: Option<RateFit>,
}

impl CornerStudy {
    pub fn contained(&self) -> bool {
        self.points.iter().all(|p| p.contained)
    }

    pub fn resolved(&self) -> bool {
        self.points.iter().all(|p| p.status == LayerStatus::Resolved)
    }
}

pub fn corner_layer_study(base: &Params, n: f64, ladder: &[f64], config: &SolverConfig<f64>) -> Result<CornerStudy> {
    let sweep = sweep_c(base, n, ladder, config)?;
    let radius_fit = fit_rate(&sweep.records, Observable::DeltaRadius)?;
    let k1 = radius_fit.amplitude;
    let mut points = Vec::with_capacity(ladder.len());
    for s in &sweep.solutions {
        let s = s.as_ref().map_err(Clone::clone)?;
        points.push(corner_layer_report(s, &sweep.limit, k1, config)?);
    }
    let decay_fit = if points.iter().all(|p| p.status == LayerStatus::Resolved) {
        let samples: Vec<(f64, f64)> = points.iter().map(|p| (p.c, p.limit_density_at_edge)).collect();
        Some(fit_power_law("rho_inf(R_c)", &samples)?)
    } else {
        None
    };
    Ok(CornerStudy {
        k1,
        radius_fit,
        points,
        decay_fit,
    })
}
