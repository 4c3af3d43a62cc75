use crate::error::{Result, StarError};

/// Least-squares power law `y = K x^s` fitted on `(ln x, ln y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub observable: String,
    pub samples: Vec<(f64, f64)>,
    pub exponent: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    /// `ln y - (ln K + s ln x)` per sample.
    pub residuals: Vec<f64>,
}

impl RateFit {
    /// Fitted value at `x`.
    pub fn predict(&self, x: f64) -> f64 {
        self.amplitude * x.powf(self.exponent)
    }
}

/// Fits `samples` (`x > 0`, `y > 0`, at least three points).
pub fn fit_power_law(observable: &str, samples: &[(f64, f64)]) -> Result<RateFit> {
    if samples.len() < 3 {
        return Err(StarError::FitDomain(format!(
            "{observable}: need at least 3 points, got {}",
            samples.len()
        )));
    }
    if let Some((x, y)) = samples
        .iter()
        .find(|(x, y)| !(*x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(StarError::FitDomain(format!(
            "{observable}: nonpositive value {y:e} at {x}"
        )));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(StarError::FitDomain(format!("{observable}: all abscissae coincide")));
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residuals: Vec<f64> = pts.iter().map(|p| p.1 - (intercept + exponent * p.0)).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(RateFit {
        observable: observable.to_string(),
        samples: samples.to_vec(),
        exponent,
        amplitude: intercept.exp(),
        r_squared,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = [4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&c: &f64| (c, 7.0 / (c * c)))
            .collect();
        let f = fit_power_law("y", &s).unwrap();
        assert!((f.exponent + 2.0).abs() < 1e-12);
        assert!((f.amplitude - 7.0).abs() < 1e-10);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn perturbed_power_law_stays_near_minus_two() {
        let s: Vec<(f64, f64)> = [4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&c: &f64| (c, 3.0 * c.powi(-2) + 0.01 * c.powi(-3)))
            .collect();
        let f = fit_power_law("y", &s).unwrap();
        assert!(f.exponent > -2.05 && f.exponent < -2.0, "{}", f.exponent);
    }

    #[test]
    fn refuses_short_or_nonpositive_data() {
        assert!(fit_power_law("y", &[(1.0, 1.0), (2.0, 0.5)]).is_err());
        let err = fit_power_law("dR", &[(4.0, 1.0), (8.0, -1e-12), (16.0, 0.1)]).unwrap_err();
        assert!(err.to_string().contains("at 8"), "{err}");
    }
}
