//! Radial quadrature on strictly increasing grids.
//!
//! Every cell `[r_j, r_{j+1}]` is integrated exactly for the cubic that
//! interpolates the four nearest nodes (stencil shifted inward at the ends).
//! On a uniform grid this is the fourth-order rule
//! `h/24 (-f_{j-1} + 13 f_j + 13 f_{j+1} - f_{j+2})`, the cumulative companion
//! of composite Simpson. Every cell integral is a fixed linear combination
//! of nodal values, so integrals depend continuously on the data even where
//! a density switches off between nodes; cells whose whole stencil is zero
//! are skipped.

use crate::scalar::{lit, Scalar};

/// Precomputed cell weights for one grid.
#[derive(Debug, Clone)]
pub struct CellRule<T> {
    starts: Vec<usize>,
    weights: Vec<[T; 4]>,
    width: usize,
}

fn stencil_start(cell: usize, nodes: usize, width: usize) -> usize {
    let start = cell.saturating_sub(1);
    start.min(nodes - width)
}

fn lagrange_basis<T: Scalar>(xs: &[T], x: T) -> [T; 4] {
    let mut out = [T::zero(); 4];
    for (k, slot) in out.iter_mut().enumerate().take(xs.len()) {
        let mut l = T::one();
        for (i, &xi) in xs.iter().enumerate() {
            if i != k {
                l = l * (x - xi) / (xs[k] - xi);
            }
        }
        *slot = l;
    }
    out
}

impl<T: Scalar> CellRule<T> {
    /// Builds the rule; `grid` must hold at least two strictly increasing nodes.
    pub fn new(grid: &[T]) -> Self {
        let n = grid.len();
        assert!(n >= 2, "quadrature grid needs at least two nodes");
        let width = n.min(4);
        let offset = lit::<T>(0.5) / lit::<T>(3.0).sqrt();
        let mut starts = Vec::with_capacity(n - 1);
        let mut weights = Vec::with_capacity(n - 1);
        for j in 0..n - 1 {
            let s = stencil_start(j, n, width);
            let xs = &grid[s..s + width];
            let (a, b) = (grid[j], grid[j + 1]);
            let half = (b - a) * lit(0.5);
            let mid = (a + b) * lit(0.5);
            let lo = lagrange_basis(xs, mid - (b - a) * offset);
            let hi = lagrange_basis(xs, mid + (b - a) * offset);
            let mut w = [T::zero(); 4];
            for k in 0..width {
                w[k] = half * (lo[k] + hi[k]);
            }
            starts.push(s);
            weights.push(w);
        }
        Self { starts, weights, width }
    }

    pub fn cell_count(&self) -> usize {
        self.starts.len()
    }

    /// Integral of the interpolant over cell `j`.
    #[inline]
    pub fn cell(&self, values: &[T], j: usize) -> T {
        let s = self.starts[j];
        if values[s..s + self.width].iter().all(|&v| v == T::zero()) {
            return T::zero();
        }
        let w = &self.weights[j];
        let mut acc = T::zero();
        for k in 0..self.width {
            acc = acc + w[k] * values[s + k];
        }
        acc
    }

    /// Integral over the whole grid.
    pub fn integrate(&self, values: &[T]) -> T {
        (0..self.cell_count()).map(|j| self.cell(values, j)).sum()
    }

    /// `out[i] = int_{r_0}^{r_i} f`.
    pub fn cumulative(&self, values: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(values.len());
        let mut acc = T::zero();
        out.push(acc);
        for j in 0..self.cell_count() {
            acc = acc + self.cell(values, j);
            out.push(acc);
        }
        out
    }

    /// `out[i] = int_{r_i}^{r_last} f`, accumulated from the outer end inward.
    pub fn cumulative_from_end(&self, values: &[T]) -> Vec<T> {
        let n = values.len();
        let mut out = vec![T::zero(); n];
        let mut acc = T::zero();
        for j in (0..self.cell_count()).rev() {
            acc = acc + self.cell(values, j);
            out[j] = acc;
        }
        out
    }
}

/// One-shot integral of sampled values over `grid`.
pub fn integrate<T: Scalar>(grid: &[T], values: &[T]) -> T {
    CellRule::new(grid).integrate(values)
}

/// Index of the cell `[grid[j], grid[j+1]]` containing `x` (clamped to the grid).
pub fn locate<T: Scalar>(grid: &[T], x: T) -> usize {
    let n = grid.len();
    if x <= grid[0] {
        return 0;
    }
    if x >= grid[n - 1] {
        return n - 2;
    }
    // partition_point gives the first node strictly greater than x.
    let upper = grid.partition_point(|&g| g <= x);
    upper - 1
}

/// Cubic Lagrange interpolation from the four nodes around `x`.
pub fn interpolate_cubic<T: Scalar>(grid: &[T], values: &[T], x: T) -> T {
    let n = grid.len();
    let width = n.min(4);
    let j = locate(grid, x);
    let s = stencil_start(j, n, width);
    let basis = lagrange_basis(&grid[s..s + width], x);
    (0..width).map(|k| basis[k] * values[s + k]).sum()
}

/// `n` equally spaced nodes on `[0, end]`, with the last node pinned to `end`.
pub fn uniform_grid<T: Scalar>(end: T, n: usize) -> Vec<T> {
    assert!(n >= 2);
    let h = end / T::from_usize_lossy(n - 1);
    let mut grid: Vec<T> = (0..n).map(|i| h * T::from_usize_lossy(i)).collect();
    grid[n - 1] = end;
    grid
}
