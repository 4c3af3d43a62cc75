use std::fmt;

use crate::error::{Result, StarError};
use crate::scalar::{lit, Scalar};

/// Speed of light: a finite positive value, or the nonrelativistic limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LightSpeed<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> LightSpeed<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            LightSpeed::Finite(c) => Some(c),
            LightSpeed::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, LightSpeed::Infinite)
    }

    /// `1/c^2`, zero in the limit.
    pub fn inverse_square(self) -> T {
        match self {
            LightSpeed::Finite(c) => T::one() / (c * c),
            LightSpeed::Infinite => T::zero(),
        }
    }
}

impl<T: Scalar> fmt::Display for LightSpeed<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LightSpeed::Finite(c) => write!(f, "{c}"),
            LightSpeed::Infinite => f.write_str("inf"),
        }
    }
}

/// Physical constants of the star functional.
///
/// `m` is the fermion mass, `q` the spin degeneracy, `kappa` the
/// gravitational coupling and `c` the speed of light. All fields are checked
/// at construction, so every kernel taking a `ModelParams` may assume them
/// valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    m: T,
    q: T,
    kappa: T,
    c: LightSpeed<T>,
}

impl<T: Scalar> ModelParams<T> {
    pub fn new(m: T, q: T, kappa: T, c: LightSpeed<T>) -> Result<Self> {
        let positive = |x: T| x.is_finite() && x > T::zero();
        if !positive(m) {
            return Err(StarError::InvalidParams(format!(
                "m must be positive and finite, got {m}"
            )));
        }
        if !(q.is_finite() && q >= T::one()) {
            return Err(StarError::InvalidParams(format!("q must be at least 1, got {q}")));
        }
        if !positive(kappa) {
            return Err(StarError::InvalidParams(format!(
                "kappa must be positive and finite, got {kappa}"
            )));
        }
        if let LightSpeed::Finite(c) = c {
            if !positive(c) {
                return Err(StarError::InvalidParams(format!(
                    "c must be positive and finite (use the infinite selector for the limit), got {c}"
                )));
            }
        }
        Ok(Self { m, q, kappa, c })
    }

    /// `m = q = kappa = 1` at the given speed of light.
    pub fn units(c: LightSpeed<T>) -> Result<Self> {
        Self::new(T::one(), T::one(), T::one(), c)
    }

    /// Same constants with a different speed of light.
    pub fn with_c(&self, c: LightSpeed<T>) -> Result<Self> {
        Self::new(self.m, self.q, self.kappa, c)
    }

    /// Same constants in the nonrelativistic limit.
    pub fn limit(&self) -> Self {
        Self {
            c: LightSpeed::Infinite,
            ..*self
        }
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn c(&self) -> LightSpeed<T> {
        self.c
    }

    /// `6 pi^2 / q`.
    fn phase_space(&self) -> T {
        lit::<T>(6.0) * T::PI() * T::PI() / self.q
    }

    /// `(6 pi^2 / q)^(2/3)`.
    pub fn a0(&self) -> T {
        self.phase_space().powf(lit(2.0 / 3.0))
    }

    /// Optimal-constant prefactor `3/4 (6 pi^2 / q)^(1/3)` of the
    /// kinetic-gravitational inequality.
    pub fn k_cl(&self) -> T {
        lit::<T>(0.75) * self.phase_space().cbrt()
    }

    /// Fermi momentum `eta = (6 pi^2 rho / q)^(1/3)`.
    pub fn fermi_momentum(&self, rho: T) -> T {
        (self.phase_space() * rho).cbrt()
    }

    /// Inverse of [`Self::fermi_momentum`].
    pub fn density_from_momentum(&self, eta: T) -> T {
        eta * eta * eta / self.phase_space()
    }
}
