//! Uniform periodic grids on `[x_min, x_max)` with the right endpoint identified.

use crate::error::SbpError;
use ndarray::Array1;

/// Uniform periodic grid; node `i` sits at `x_min + i * dx` and the right
/// endpoint aliases the left one.
#[derive(Debug, Clone)]
pub struct PeriodicGrid {
    x_min: f64,
    x_max: f64,
    n: usize,
    dx: f64,
    nodes: Array1<f64>,
}

impl PeriodicGrid {
    /// Builds a grid of `n` nodes covering `[x_min, x_max)`.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self, SbpError> {
        if !(x_max > x_min) {
            return Err(SbpError::EmptyDomain { x_min, x_max });
        }
        if n < 2 {
            return Err(SbpError::GridTooSmall { n, min: 2 });
        }
        let dx = (x_max - x_min) / n as f64;
        let nodes = Array1::from_iter((0..n).map(|i| x_min + i as f64 * dx));
        Ok(Self {
            x_min,
            x_max,
            n,
            dx,
            nodes,
        })
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Node spacing.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Left domain boundary.
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Right domain boundary (not a node).
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Domain length `x_max - x_min`.
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Node coordinates.
    pub fn nodes(&self) -> &Array1<f64> {
        &self.nodes
    }

    /// Samples a function at every node.
    pub fn sample(&self, mut f: impl FnMut(f64) -> f64) -> Array1<f64> {
        Array1::from_iter(self.nodes.iter().map(|&x| f(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spacing_and_nodes() {
        let g = PeriodicGrid::new(-150.0, 150.0, 1000).unwrap();
        assert_relative_eq!(g.dx(), 0.3, max_relative = 1e-15);
        assert_eq!(g.n(), 1000);
        assert_relative_eq!(g.nodes()[0], -150.0);
        assert_relative_eq!(g.nodes()[999], 150.0 - 0.3, max_relative = 1e-12);
        assert_relative_eq!(g.length(), 300.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PeriodicGrid::new(1.0, 1.0, 10).is_err());
        assert!(PeriodicGrid::new(0.0, -1.0, 10).is_err());
        assert!(PeriodicGrid::new(0.0, 1.0, 1).is_err());
    }
}
