use thiserror::Error;

/// Failures raised by the model kernel, the solvers and the study harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("not defined for this model: {0}")]
    UnsupportedModel(String),

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("no free boundary before the safeguard radius r = {radius:e} (central potential {central_potential:e})")]
    NoBoundary { radius: f64, central_potential: f64 },

    #[error("step size underflow at r = {radius:e}")]
    Stiffness { radius: f64 },

    #[error(
        "critical mass exceeded: target N = {target:e} is not reachable, largest bound mass found {largest_mass:e} \
         (lower estimate of the collapse threshold)"
    )]
    CriticalMassExceeded { target: f64, largest_mass: f64 },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("fixed-point iteration did not converge after {iterations} sweeps (last change {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("shooting and fixed-point backends disagree: {0}")]
    BackendMismatch(String),

    #[error("cannot fit power law: {0}")]
    FitDomain(String),
}

pub type Result<T, E = StarError> = std::result::Result<T, E>;
