use crate::error::{Result, StarError};
use crate::quadrature::{interpolate_cubic, uniform_grid, CellRule};
use crate::scalar::{lit, Scalar};

/// Radially symmetric, nonincreasing density sampled on a grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile<T> {
    grid: Vec<T>,
    values: Vec<T>,
    support_radius: T,
    mass: T,
}

impl<T: Scalar> DensityProfile<T> {
    /// Validates samples and infers the support radius: the last node if the
    /// density is positive there, otherwise the first node where it vanishes.
    pub fn new(grid: Vec<T>, values: Vec<T>) -> Result<Self> {
        check_samples(&grid, &values)?;
        let support = match values.iter().rposition(|&v| v > T::zero()) {
            None => T::zero(),
            Some(i) if i + 1 == values.len() => grid[i],
            Some(i) => grid[i + 1],
        };
        Self::finish(grid, values, support)
    }

    /// Like [`Self::new`] with an externally located support radius, which may
    /// fall between nodes. Nodes beyond it must carry zero density; a node
    /// exactly at the radius may hold the edge value of a jump.
    pub fn with_support(grid: Vec<T>, values: Vec<T>, support_radius: T) -> Result<Self> {
        check_samples(&grid, &values)?;
        if !(support_radius >= T::zero() && support_radius.is_finite()) {
            return Err(StarError::Domain(format!(
                "support radius {support_radius} is not a nonnegative number"
            )));
        }
        if let Some((r, v)) = grid
            .iter()
            .zip(&values)
            .find(|&(&r, &v)| r > support_radius && v > T::zero())
        {
            return Err(StarError::Domain(format!(
                "density {v} at r = {r} lies outside the declared support {support_radius}"
            )));
        }
        Self::finish(grid, values, support_radius)
    }

    /// Constant density on `[0, radius]`, sampled at `nodes` points.
    pub fn uniform_ball(density: T, radius: T, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(StarError::Domain("a profile needs at least two nodes".into()));
        }
        Self::new(uniform_grid(radius, nodes), vec![density; nodes])
    }

    fn finish(grid: Vec<T>, values: Vec<T>, support_radius: T) -> Result<Self> {
        let four_pi = lit::<T>(4.0) * T::PI();
        let weighted: Vec<T> = grid.iter().zip(&values).map(|(&r, &v)| four_pi * v * r * r).collect();
        let mass = CellRule::new(&grid).integrate(&weighted);
        Ok(Self {
            grid,
            values,
            support_radius,
            mass,
        })
    }

    pub fn grid(&self) -> &[T] {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn support_radius(&self) -> T {
        self.support_radius
    }

    /// `4 pi int rho r^2 dr` by the grid quadrature.
    pub fn mass(&self) -> T {
        self.mass
    }

    pub fn central_density(&self) -> T {
        self.values[0]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass == T::zero()
    }

    /// Cubic interpolation of the samples; zero at and beyond the support.
    pub fn density_at(&self, r: T) -> T {
        if r >= self.support_radius || r > *self.grid.last().unwrap() {
            return T::zero();
        }
        interpolate_cubic(&self.grid, &self.values, r.max(T::zero())).max(T::zero())
    }

    /// `4 pi int f(rho(r)) r^2 dr`.
    pub fn integrate_density(&self, f: impl Fn(T) -> T) -> T {
        let four_pi = lit::<T>(4.0) * T::PI();
        let w: Vec<T> = self
            .grid
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| {
                if v > T::zero() {
                    four_pi * f(v) * r * r
                } else {
                    T::zero()
                }
            })
            .collect();
        CellRule::new(&self.grid).integrate(&w)
    }

    /// `4 pi int rho^p r^2 dr`.
    pub fn moment(&self, power: T) -> T {
        self.integrate_density(|v| v.powf(power))
    }

    /// `r -> amplitude * rho(dilation * r)`.
    pub fn rescaled(&self, amplitude: T, dilation: T) -> Result<Self> {
        if !(amplitude > T::zero() && dilation > T::zero()) {
            return Err(StarError::Domain("rescaling factors must be positive".into()));
        }
        let grid = self.grid.iter().map(|&r| r / dilation).collect();
        let values = self.values.iter().map(|&v| v * amplitude).collect();
        Self::with_support(grid, values, self.support_radius / dilation)
    }

    /// Relative mass change when every other node is dropped; a cheap
    /// Richardson-style resolution diagnostic.
    pub fn resolution_defect(&self) -> T {
        if self.mass == T::zero() || self.grid.len() < 5 {
            return T::zero();
        }
        let mut grid: Vec<T> = self.grid.iter().step_by(2).copied().collect();
        let mut values: Vec<T> = self.values.iter().step_by(2).copied().collect();
        if self.grid.len().is_multiple_of(2) {
            grid.push(*self.grid.last().unwrap());
            values.push(*self.values.last().unwrap());
        }
        let coarse = DensityProfile::with_support(grid, values, self.support_radius)
            .map(|p| p.mass)
            .unwrap_or(T::nan());
        ((coarse - self.mass) / self.mass).abs()
    }
}

fn check_samples<T: Scalar>(grid: &[T], values: &[T]) -> Result<()> {
    if grid.len() < 2 {
        return Err(StarError::Domain("a profile needs at least two nodes".into()));
    }
    if grid.len() != values.len() {
        return Err(StarError::Domain(format!(
            "grid has {} nodes but {} values were given",
            grid.len(),
            values.len()
        )));
    }
    if grid[0] != T::zero() {
        return Err(StarError::Domain(format!(
            "grid must start at r = 0, starts at {}",
            grid[0]
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(StarError::Domain(format!(
            "grid is not strictly increasing near r = {}",
            w[0]
        )));
    }
    if let Some(v) = values.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
        return Err(StarError::Domain(format!(
            "density value {v} is not a nonnegative number"
        )));
    }
    // Rounding in a converged iterate may leave last-bit wiggles.
    let slack = lit::<T>(8.0) * T::epsilon() * values[0];
    if let Some(i) = values.windows(2).position(|w| w[1] > w[0] + slack) {
        return Err(StarError::Domain(format!(
            "density increases between r = {} and r = {}",
            grid[i],
            grid[i + 1]
        )));
    }
    Ok(())
}
