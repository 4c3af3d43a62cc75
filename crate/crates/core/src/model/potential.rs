use crate::error::Result;
use crate::model::profile::DensityProfile;
use crate::quadrature::{interpolate_cubic, CellRule};
use crate::scalar::{lit, Scalar};

/// Newtonian potential `V = |x|^-1 * rho` of a radial profile, on its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPotential<T> {
    grid: Vec<T>,
    values: Vec<T>,
    mass: T,
    support_radius: T,
}

impl<T: Scalar> NewtonPotential<T> {
    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn mass(&self) -> T {
        self.mass
    }

    /// Value at any radius: `N / r` outside the support, interpolated inside.
    pub fn at(&self, r: T) -> T {
        if r >= self.support_radius && r > T::zero() {
            return self.mass / r;
        }
        interpolate_cubic(&self.grid, &self.values, r.max(T::zero()))
    }
}

/// `V(r) = (1/r) int_{|y|<r} rho + int_{|y|>r} rho / |y|`, from one outward and
/// one inward cumulative quadrature.
pub fn newton_potential<T: Scalar>(profile: &DensityProfile<T>) -> Result<NewtonPotential<T>> {
    let grid = profile.grid();
    let rule = CellRule::new(grid);
    let four_pi = lit::<T>(4.0) * T::PI();
    let shell: Vec<T> = grid
        .iter()
        .zip(profile.values())
        .map(|(&r, &v)| four_pi * v * r * r)
        .collect();
    let weighted: Vec<T> = grid
        .iter()
        .zip(profile.values())
        .map(|(&r, &v)| four_pi * v * r)
        .collect();
    let inner = rule.cumulative(&shell);
    let outer = rule.cumulative_from_end(&weighted);
    let mass = profile.mass();
    let support = profile.support_radius();
    let values = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            if r == T::zero() {
                outer[0]
            } else if r >= support {
                mass / r
            } else {
                inner[i] / r + outer[i]
            }
        })
        .collect();
    Ok(NewtonPotential {
        grid: grid.to_vec(),
        values,
        mass,
        support_radius: support,
    })
}

/// `D(rho, rho) = 1/2 int V rho`.
pub fn coulomb_energy<T: Scalar>(profile: &DensityProfile<T>) -> Result<T> {
    let v = newton_potential(profile)?;
    let four_pi = lit::<T>(4.0) * T::PI();
    let integrand: Vec<T> = profile
        .grid()
        .iter()
        .zip(profile.values())
        .zip(v.values())
        .map(|((&r, &rho), &pot)| four_pi * rho * pot * r * r)
        .collect();
    Ok(lit::<T>(0.5) * CellRule::new(profile.grid()).integrate(&integrand))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn uniform_ball_potential() {
        let ball = DensityProfile::uniform_ball(1.0, 1.0, 201).unwrap();
        let v = newton_potential(&ball).unwrap();
        assert_relative_eq!(v.values()[0], 2.0 * PI, max_relative = 1e-13);
        assert_relative_eq!(v.values()[100], 11.0 * PI / 6.0, max_relative = 1e-13);
        assert_relative_eq!(v.at(3.0), 4.0 * PI / 9.0, max_relative = 1e-13);
        assert!(v.values().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn uniform_ball_self_energy() {
        let rho = 3.0 / (4.0 * PI);
        let ball = DensityProfile::uniform_ball(rho, 1.0, 2001).unwrap();
        assert_relative_eq!(coulomb_energy(&ball).unwrap(), 0.6, max_relative = 1e-12);
    }

    #[test]
    fn zero_profile_has_no_energy() {
        let z = DensityProfile::new(vec![0.0, 0.5, 1.0], vec![0.0; 3]).unwrap();
        assert_eq!(coulomb_energy(&z).unwrap(), 0.0);
    }
}
