//! Dispersion relation and the semiclassical kinetic energy densities.
//!
//! With `s = eta / (m c)` every finite-`c` density has the form
//! `3 rho m c^2 * sum_k a_k s^(2k) / (2k + 3)` where `a_k` are binomial
//! coefficients of `(1+t)^(1/2)` or `(1+t)^(-1/2)`. For `s <= 0.5` the series
//! is summed directly; above that the closed forms in `asinh` are free of
//! cancellation.

use crate::error::{Result, StarError};
use crate::model::params::{LightSpeed, ModelParams};
use crate::scalar::{lit, Scalar};

const SERIES_LIMIT: f64 = 0.5;
const MAX_TERMS: usize = 200;

/// Which combination of binomial series to sum.
#[derive(Clone, Copy)]
enum Series {
    /// `sqrt(1+t) - 1`
    Kinetic,
    /// `(1+t)^(-1/2)`
    Inverse,
    /// `sqrt(1+t) + (1+t)^(-1/2) - 2`
    Defect,
    /// `sqrt(1+t) - (1+t)^(-1/2)`
    Virial,
}

/// `sum_k a_k s^(2k) / (2k + 3)` for the requested combination.
fn series_sum<T: Scalar>(kind: Series, s: T) -> T {
    let t = s * s;
    let half = lit::<T>(0.5);
    let (mut plus, mut minus) = (T::one(), T::one()); // binomial(1/2, k), binomial(-1/2, k)
    let mut power = T::one();
    let mut sum = match kind {
        Series::Inverse => T::one() / lit(3.0),
        _ => T::zero(),
    };
    for k in 1..MAX_TERMS {
        let kf = T::from_usize_lossy(k);
        plus = plus * (half - kf + T::one()) / kf;
        minus = minus * (-half - kf + T::one()) / kf;
        power = power * t;
        let coeff = match kind {
            Series::Kinetic => plus,
            Series::Inverse => minus,
            Series::Defect => plus + minus,
            Series::Virial => plus - minus,
        };
        let term = coeff * power / (lit::<T>(2.0) * kf + lit(3.0));
        sum = sum + term;
        if k > 2 && term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

/// `q c (mc)^4 / (16 pi^2)`, the natural scale of the closed forms.
fn closed_form_scale<T: Scalar>(params: &ModelParams<T>, c: T) -> T {
    let mc = params.m() * c;
    params.q() * c * mc.powi(4) / (lit::<T>(16.0) * T::PI() * T::PI())
}

/// Kinetic symbol `T_c(p) = sqrt(c^2 p^2 + m^2 c^4) - m c^2`, or `p^2 / 2m` in
/// the limit. The finite-`c` branch is evaluated as
/// `c^2 p^2 / (sqrt(c^2 p^2 + m^2 c^4) + m c^2)`.
pub fn dispersion<T: Scalar>(p: T, params: &ModelParams<T>) -> T {
    debug_assert!(p >= T::zero());
    let m = params.m();
    match params.c() {
        LightSpeed::Infinite => p * p / (lit::<T>(2.0) * m),
        LightSpeed::Finite(c) => {
            let rest = m * c * c;
            let cp = c * p;
            cp * cp / ((cp * cp + rest * rest).sqrt() + rest)
        }
    }
}

/// Fermi momentum whose kinetic symbol equals `w >= 0`:
/// `eta^2 = w^2 / c^2 + 2 m w`.
pub fn momentum_from_potential<T: Scalar>(w: T, params: &ModelParams<T>) -> T {
    let two_m_w = lit::<T>(2.0) * params.m() * w;
    match params.c() {
        LightSpeed::Infinite => two_m_w.sqrt(),
        LightSpeed::Finite(c) => (w * w / (c * c) + two_m_w).sqrt(),
    }
}

/// Density at local chemical potential `w`, assumed nonnegative (callers
/// pass the positive part). Hot path of both solvers.
#[inline]
pub fn density_from_potential<T: Scalar>(w: T, params: &ModelParams<T>) -> T {
    if w <= T::zero() {
        return T::zero();
    }
    params.density_from_momentum(momentum_from_potential(w, params))
}

/// Density `rho` with `dispersion(eta(rho)) = w`.
pub fn inverse_dispersion<T: Scalar>(w: T, params: &ModelParams<T>) -> Result<T> {
    if w < T::zero() || w.is_nan() {
        return Err(StarError::Domain(format!(
            "inverse dispersion needs a nonnegative potential, got {w}"
        )));
    }
    Ok(density_from_potential(w, params))
}

/// Kinetic energy density `j(rho)` of a filled Fermi ball.
pub fn kinetic_density<T: Scalar>(rho: T, params: &ModelParams<T>) -> T {
    if rho <= T::zero() {
        return T::zero();
    }
    let m = params.m();
    match params.c() {
        LightSpeed::Infinite => lit::<T>(0.3) / m * params.a0() * rho.powf(lit(5.0 / 3.0)),
        LightSpeed::Finite(c) => {
            let s = params.fermi_momentum(rho) / (m * c);
            if s <= lit(SERIES_LIMIT) {
                lit::<T>(3.0) * rho * m * c * c * series_sum(Series::Kinetic, s)
            } else {
                let root = (T::one() + s * s).sqrt();
                closed_form_scale(params, c) * (s * (lit::<T>(2.0) * s * s + T::one()) * root - s.asinh())
                    - m * c * c * rho
            }
        }
    }
}

fn require_finite<T: Scalar>(params: &ModelParams<T>, what: &str) -> Result<T> {
    params
        .c()
        .finite()
        .ok_or_else(|| StarError::UnsupportedModel(format!("{what} has no nonrelativistic counterpart")))
}

/// `jbar(rho) = q/(8 pi^3) int_{|p| < eta} dp / sqrt(c^2 p^2 + m^2 c^4)`.
pub fn kinetic_density_bar<T: Scalar>(rho: T, params: &ModelParams<T>) -> Result<T> {
    let c = require_finite(params, "jbar")?;
    if rho <= T::zero() {
        return Ok(T::zero());
    }
    let m = params.m();
    let s = params.fermi_momentum(rho) / (m * c);
    Ok(if s <= lit(SERIES_LIMIT) {
        lit::<T>(3.0) * rho / (m * c * c) * series_sum(Series::Inverse, s)
    } else {
        let mc = m * c;
        params.q() * mc * mc / (lit::<T>(4.0) * T::PI() * T::PI() * c) * (s * (T::one() + s * s).sqrt() - s.asinh())
    })
}

/// `j(rho) + m^2 c^4 jbar(rho) - m c^2 rho`, evaluated without cancellation.
/// Nonnegative: its momentum integrand is `T_c(p)^2 / sqrt(c^2 p^2 + m^2 c^4)`.
pub fn kinetic_defect<T: Scalar>(rho: T, params: &ModelParams<T>) -> Result<T> {
    let c = require_finite(params, "the kinetic defect")?;
    if rho <= T::zero() {
        return Ok(T::zero());
    }
    let m = params.m();
    let s = params.fermi_momentum(rho) / (m * c);
    Ok(if s <= lit(SERIES_LIMIT) {
        lit::<T>(3.0) * rho * m * c * c * series_sum(Series::Defect, s)
    } else {
        let root = (T::one() + s * s).sqrt();
        closed_form_scale(params, c)
            * (s * (lit::<T>(2.0) * s * s + lit(5.0)) * root
                - lit::<T>(5.0) * s.asinh()
                - lit::<T>(16.0 / 3.0) * s * s * s)
    })
}

/// Local integrand of the dilation (virial) identity:
/// `j - m^2 c^4 jbar + m c^2 rho` at finite `c`, `2 j_inf` in the limit.
pub fn virial_density<T: Scalar>(rho: T, params: &ModelParams<T>) -> T {
    if rho <= T::zero() {
        return T::zero();
    }
    let m = params.m();
    match params.c() {
        LightSpeed::Infinite => lit::<T>(2.0) * kinetic_density(rho, params),
        LightSpeed::Finite(c) => {
            let s = params.fermi_momentum(rho) / (m * c);
            if s <= lit(SERIES_LIMIT) {
                lit::<T>(3.0) * rho * m * c * c * series_sum(Series::Virial, s)
            } else {
                let root = (T::one() + s * s).sqrt();
                closed_form_scale(params, c)
                    * (s * (lit::<T>(2.0) * s * s - lit(3.0)) * root + lit::<T>(3.0) * s.asinh())
            }
        }
    }
}

/// `T_c(eta(rho)) * rho`, the integrand of the multiplier identity.
pub fn chemical_work_density<T: Scalar>(rho: T, params: &ModelParams<T>) -> T {
    if rho <= T::zero() {
        return T::zero();
    }
    dispersion(params.fermi_momentum(rho), params) * rho
}
