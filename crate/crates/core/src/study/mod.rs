//! Experiments on the solver: c-ladder convergence rates, mass scaling laws,
//! the corner layer between the two supports, and a dilation stability probe.

pub mod corner;
pub mod critical;
pub mod fit;
pub mod sweep;

pub use corner::{corner_layer_report, corner_layer_study, CornerPoint, CornerStudy, LayerStatus};
pub use critical::{critical_probe, CriticalEstimate, EnergySample, LambdaSpan, Verdict};
pub use fit::{fit_power_law, RateFit};
pub use sweep::{
    fit_rate, sweep_c, sweep_n, validate_ladder, CSweep, NSweep, Observable, RecordStatus, SweepRecord,
    RADIUS_IDENTITY_TOL,
};
