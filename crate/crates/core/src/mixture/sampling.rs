use alloc::vec::Vec;

use super::Density;
use crate::error::{Error, Result};
use crate::quadrature::ReferenceRule;
use crate::random;

/// Inverse-CDF sampler over a tabulated CDF.
///
/// The CDF is tabulated at `grid_points + 1` equally spaced abscissae by
/// integrating the density over each cell with a 4-point Gauss-Legendre rule,
/// then inverted by linear interpolation inside the cell.
#[derive(Debug, Clone)]
pub struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    pub const DEFAULT_GRID_POINTS: usize = 4096;

    pub fn new<D: Density + ?Sized>(mix: &D, grid_points: usize) -> Result<Self> {
        if mix.is_identically_zero() {
            return Err(Error::Degenerate);
        }
        let cells = grid_points.max(1);
        let h = 1.0 / cells as f64;
        let rule = ReferenceRule::gauss_legendre(4);
        let mut cumulative = Vec::with_capacity(cells + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for j in 0..cells {
            let left = j as f64 * h;
            let mut cell = 0.0;
            for (t, w) in rule.nodes.iter().zip(&rule.weights) {
                cell += w * mix.density(left + t * h)?;
            }
            acc += cell.max(0.0) * h;
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::Degenerate);
        }
        Ok(Self { cumulative })
    }

    pub fn cells(&self) -> usize {
        self.cumulative.len() - 1
    }

    pub fn total_mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Tabulated CDF, normalized to end at 1, linearly interpolated.
    pub fn tabulated_cdf(&self, x: f64) -> f64 {
        let n = self.cells();
        if x <= 0.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let pos = x * n as f64;
        let j = (pos as usize).min(n - 1);
        let t = pos - j as f64;
        let c = &self.cumulative;
        (c[j] + t * (c[j + 1] - c[j])) / self.total_mass()
    }

    /// Maps `u ∈ [0, 1)` through the inverse of the tabulated CDF.
    pub fn quantile(&self, u: f64) -> f64 {
        let target = u * self.total_mass();
        let c = &self.cumulative;
        // First cell whose right edge exceeds the target; zero-mass cells are skipped.
        let j = c.partition_point(|v| *v <= target).clamp(1, c.len() - 1) - 1;
        let width = c[j + 1] - c[j];
        let t = if width > 0.0 {
            (target - c[j]) / width
        } else {
            0.5
        };
        (j as f64 + t.clamp(0.0, 1.0)) / self.cells() as f64
    }

    /// `count` draws in `(0, 1)`, deterministic for a given seed.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        let mut rng = random::seeded(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let x = self.quantile(random::unit(&mut rng));
            if x > 0.0 && x < 1.0 {
                out.push(x);
            }
        }
        out
    }
}

/// Convenience wrapper: tabulate and draw in one call.
pub fn sample<D: Density + ?Sized>(
    mix: &D,
    count: usize,
    seed: u64,
    grid_points: usize,
) -> Result<Vec<f64>> {
    Ok(Sampler::new(mix, grid_points)?.sample(count, seed))
}
