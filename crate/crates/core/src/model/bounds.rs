//! Randomized check of the two scalar operator inequalities on `T_c`:
//! `T_c(p) + delta >= min{2 sqrt(delta) / sqrt(2 sqrt(5) m), c/2} p` and,
//! for `c > 1`, `p^4 / (8m(p^2+m^2)c^2) <= p^2/2m - T_c(p) <= p^4 / (8 m^3 c^2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, StarError};
use crate::model::kinetic::dispersion;
use crate::model::params::{LightSpeed, ModelParams};

/// Closed sampling intervals; every coordinate is drawn log-uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRanges {
    pub p: (f64, f64),
    pub m: (f64, f64),
    pub c: (f64, f64),
    pub delta: (f64, f64),
}

impl Default for BoundRanges {
    fn default() -> Self {
        Self {
            p: (1e-4, 1e4),
            m: (1e-1, 1e1),
            c: (1.0, 1e4),
            delta: (1e-4, 1e4),
        }
    }
}

impl BoundRanges {
    fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("p", self.p), ("m", self.m), ("c", self.c), ("delta", self.delta)] {
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(StarError::Domain(format!(
                    "range for {name} must be positive and ordered"
                )));
            }
        }
        if self.c.0 < 1.0 {
            return Err(StarError::Domain("the dispersion sandwich needs c >= 1".into()));
        }
        Ok(())
    }
}

/// One sampled tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSample {
    pub p: f64,
    pub m: f64,
    pub c: f64,
    pub delta: f64,
}

/// Outcome of [`dispersion_bound_check`]. Violations are measured relative
/// to the larger side of each inequality; positive means violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub samples: usize,
    pub violations: usize,
    pub worst_violation: f64,
    pub worst_sample: Option<BoundSample>,
}

/// `min{2 sqrt(delta) / sqrt(2 sqrt(5) m), c/2}`.
pub fn operator_lower_slope(m: f64, c: f64, delta: f64) -> f64 {
    let low_momentum = 2.0 * delta.sqrt() / (2.0 * 5f64.sqrt() * m).sqrt();
    low_momentum.min(0.5 * c)
}

/// `p^2/2m - T_c(p)` in the stable form `p^4 / (2 m c^2 (sqrt(p^2/c^2 + m^2) + m)^2)`.
pub fn limit_gap(p: f64, m: f64, c: f64) -> f64 {
    let s = (p * p / (c * c) + m * m).sqrt() + m;
    p.powi(4) / (2.0 * m * c * c * s * s)
}

fn relative_excess(lhs: f64, rhs: f64) -> f64 {
    // Positive when lhs > rhs.
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs) / scale
    }
}

/// Worst signed violation over both inequalities at one sample.
pub fn violation_at(s: &BoundSample) -> f64 {
    let params = ModelParams::new(s.m, 1.0, 1.0, LightSpeed::Finite(s.c)).expect("sampled parameters are valid");
    let t = dispersion(s.p, &params);
    let lower = relative_excess(operator_lower_slope(s.m, s.c, s.delta) * s.p, t + s.delta);
    let gap = limit_gap(s.p, s.m, s.c);
    let newtonian = s.p * s.p / (2.0 * s.m);
    // The naive difference is only trustworthy where it keeps some digits.
    let consistency = if gap > 1e-4 * newtonian {
        ((newtonian - t) - gap).abs() / gap - 1e-10
    } else {
        f64::NEG_INFINITY
    };
    let c2 = s.c * s.c;
    let sandwich_low = relative_excess(s.p.powi(4) / (8.0 * s.m * (s.p * s.p + s.m * s.m) * c2), gap);
    let sandwich_high = relative_excess(gap, s.p.powi(4) / (8.0 * s.m.powi(3) * c2));
    lower.max(sandwich_low).max(sandwich_high).max(consistency)
}

/// Draws `samples` tuples from a ChaCha8 stream seeded with `seed` and counts
/// relative violations above `1e-12`.
pub fn dispersion_bound_check(samples: usize, seed: u64, ranges: &BoundRanges) -> Result<BoundReport> {
    if samples == 0 {
        return Err(StarError::Domain("need at least one sample".into()));
    }
    ranges.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log_uniform = |(lo, hi): (f64, f64)| -> f64 {
        let u: f64 = rng.gen();
        (lo.ln() + u * (hi.ln() - lo.ln())).exp()
    };
    let mut report = BoundReport {
        samples,
        violations: 0,
        worst_violation: f64::NEG_INFINITY,
        worst_sample: None,
    };
    for _ in 0..samples {
        let s = BoundSample {
            p: log_uniform(ranges.p),
            m: log_uniform(ranges.m),
            c: log_uniform(ranges.c),
            delta: log_uniform(ranges.delta),
        };
        let v = violation_at(&s);
        if v > 1e-12 {
            report.violations += 1;
        }
        if v > report.worst_violation {
            report.worst_violation = v;
            report.worst_sample = Some(s);
        }
    }
    Ok(report)
}
