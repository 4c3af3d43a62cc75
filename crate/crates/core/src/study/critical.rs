use std::fmt;

use crate::error::{Result, StarError};
use crate::model::{kinetic_density, GnsTracker, LightSpeed};
use crate::solver::{solve_star, SolverConfig};

type Params = crate::model::ModelParams<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    UnboundedBelow,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "STABLE",
            Verdict::UnboundedBelow => "UNBOUNDED_BELOW",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Log-spaced dilation factors `lambda` of the trial family `lambda^3 rho(lambda x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSpan {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl Default for LambdaSpan {
    fn default() -> Self {
        Self {
            min: 1e-2,
            max: 1e4,
            samples: 25,
        }
    }
}

impl LambdaSpan {
    pub fn validate(&self) -> Result<()> {
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(StarError::Config(format!(
                "lambda span [{}, {}] must be positive and increasing",
                self.min, self.max
            )));
        }
        if self.samples < 8 {
            return Err(StarError::Config(format!(
                "lambda span needs at least 8 samples, got {}",
                self.samples
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (self.min.ln(), self.max.ln());
        let last = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i + 1 == self.samples {
                    self.max
                } else {
                    (a + (b - a) * i as f64 / last).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub lambda: f64,
    pub kinetic: f64,
    pub coulomb: f64,
    pub energy: f64,
}

/// Stability verdict of the functional at mass `N` along a dilation family.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalEstimate {
    pub params: Params,
    pub n: f64,
    pub family: String,
    pub samples: Vec<EnergySample>,
    pub verdict: Verdict,
    /// Running minimum of the kinetic-gravitational ratio over all profiles
    /// the tracker has seen.
    pub gns_ratio: f64,
    /// `gns_ratio^(3/2)`, an upper bound on the critical mass at `c = 1`.
    pub critical_mass_bound: f64,
}

/// Number of trailing samples that decide the verdict.
const TAIL: usize = 4;

fn classify(samples: &[EnergySample]) -> Verdict {
    let tail = &samples[samples.len() - TAIL..];
    let rising = tail.windows(2).all(|w| w[1].energy > w[0].energy);
    let falling = tail.windows(2).all(|w| w[1].energy < w[0].energy);
    let (a, b) = (tail[TAIL - 2], tail[TAIL - 1]);
    let slope = (b.energy - a.energy) / (b.lambda / a.lambda).ln();
    if rising {
        Verdict::Stable
    } else if falling && slope < 0.0 {
        Verdict::UnboundedBelow
    } else {
        Verdict::Inconclusive
    }
}

/// Evaluates `E_c(lambda^3 rho(lambda x))` along `span`, with `rho` the limit
/// minimizer of mass `n`, and folds that profile into `tracker`.
pub fn critical_probe(
    params: &Params,
    n: f64,
    span: &LambdaSpan,
    tracker: &mut GnsTracker<f64>,
    config: &SolverConfig<f64>,
) -> Result<CriticalEstimate> {
    span.validate()?;
    let reference = solve_star(&params.limit(), n, config)?;
    let profile = &reference.profile;
    let coulomb = reference.coulomb_energy;
    let kappa = params.kappa();
    let samples: Vec<EnergySample> = span
        .values()
        .into_iter()
        .map(|lambda| {
            let cube = lambda * lambda * lambda;
            let kinetic = profile.integrate_density(|rho| kinetic_density(cube * rho, params)) / cube;
            let d = lambda * coulomb;
            EnergySample {
                lambda,
                kinetic,
                coulomb: d,
                energy: kinetic - kappa * d,
            }
        })
        .collect();
    tracker.observe(profile, params)?;
    let ratio = tracker.ratio().expect("tracker has seen a profile");
    let family = match params.c() {
        LightSpeed::Infinite => "lambda^3 rho_inf(lambda x), limit functional".to_string(),
        LightSpeed::Finite(c) => format!("lambda^3 rho_inf(lambda x), relativistic functional at c = {c}"),
    };
    Ok(CriticalEstimate {
        params: *params,
        n,
        family,
        verdict: classify(&samples),
        samples,
        gns_ratio: ratio,
        critical_mass_bound: ratio.powf(1.5),
    })
}
