//! Uniform grids, sampled complex fields, and Riemann-sum Fourier
//! transforms.
//!
//! All sample nodes sit at cell midpoints: axis `k` has nodes
//! `lo_k + (j + 1/2) h_k`. The forward transform of a field approximates
//! the continuum integral `∫ f(x) e^{-2πi x·ξ} dx` as `Π h · Σ f_j e^{...}`,
//! evaluated on the reciprocal grid (same sample counts, box
//! `[-1/(2h_k), 1/(2h_k)]`, centered at zero). With that normalization the
//! discrete transform is exactly unitary with respect to the weighted
//! `l^2` norms on both grids.

mod norms;
mod slope;
mod special;
mod transform;

pub use norms::lp_norm;
pub use slope::{fit_slope, SlopeFit};
pub use special::{bump_profile, make_bump, make_majorant, plateau, smooth_step};
pub use transform::{transform, transform_at, transform_onto, Direction};

use crate::error::{Error, Result};
use crate::Complex64;

/// One axis of a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    pub spacing: f64,
}

/// Uniform tensor-product grid over a box, power-of-two samples per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    /// Build a grid over `boxes` with `samples[k]` cells on axis `k`.
    pub fn new(boxes: &[(f64, f64)], samples: &[usize]) -> Result<Self> {
        if boxes.len() != samples.len() {
            return Err(Error::DimensionMismatch {
                expected: boxes.len(),
                got: samples.len(),
            });
        }
        if boxes.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut axes = Vec::with_capacity(boxes.len());
        for (k, (&(lo, hi), &n)) in boxes.iter().zip(samples).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::DegenerateBox { axis: k, lo, hi });
            }
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::BadSampleCount { axis: k, samples: n });
            }
            axes.push(Axis {
                lo,
                hi,
                samples: n,
                spacing: (hi - lo) / n as f64,
            });
        }
        Ok(Grid { axes })
    }

    /// Centered square grid: box `[-half, half]^dim`, `n` samples per axis.
    pub fn centered(dim: usize, half: f64, n: usize) -> Result<Self> {
        Grid::new(&vec![(-half, half); dim], &vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, k: usize) -> &Axis {
        &self.axes[k]
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.samples).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume of one cell, `Π h_k`.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing).product()
    }

    /// Node coordinate on axis `k` at index `j` (cell midpoint).
    pub fn node(&self, k: usize, j: usize) -> f64 {
        let a = &self.axes[k];
        a.lo + (j as f64 + 0.5) * a.spacing
    }

    /// Full coordinates of the cell with multi-index `idx`.
    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .enumerate()
            .map(|(k, &j)| self.node(k, j))
            .collect()
    }

    /// Decompose a flat row-major index (last axis fastest).
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dim()];
        for k in (0..self.dim()).rev() {
            let n = self.axes[k].samples;
            idx[k] = flat % n;
            flat /= n;
        }
        idx
    }

    /// Flatten a multi-index (row-major, last axis fastest).
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut flat = 0usize;
        for (k, &j) in idx.iter().enumerate() {
            flat = flat * self.axes[k].samples + j;
        }
        flat
    }

    /// Coordinates of the cell with flat index `flat`.
    pub fn point_at(&self, flat: usize) -> Vec<f64> {
        self.point(&self.multi_index(flat))
    }

    /// Reciprocal grid: same sample counts, spacing `1/(N h_k)`, with
    /// nodes on the integer lattice `(k - N/2)/(N h_k)` so that the zero
    /// frequency is a node and products of on-node harmonics stay on
    /// nodes. The box is shifted half a bin to keep nodes at cell
    /// midpoints.
    pub fn reciprocal(&self) -> Grid {
        let axes = self
            .axes
            .iter()
            .map(|a| {
                let n = a.samples;
                let step = 1.0 / (a.spacing * n as f64);
                let lo = -0.5 / a.spacing - 0.5 * step;
                Axis {
                    lo,
                    hi: lo + step * n as f64,
                    samples: n,
                    spacing: step,
                }
            })
            .collect();
        Grid { axes }
    }

    /// True if `other` can serve as the transform target of `self`:
    /// same sample counts and `h_src · h_dst · N = 1` on every axis.
    pub fn reciprocal_compatible(&self, other: &Grid) -> bool {
        self.dim() == other.dim()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| {
                a.samples == b.samples
                    && (a.spacing * b.spacing * a.samples as f64 - 1.0).abs() < 1e-9
            })
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Debug, Clone)]
pub struct SampledField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SampledField {
    /// Wrap explicit values; checks count and finiteness.
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ValueCountMismatch {
                got: values.len(),
                want: grid.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteValue { index: i });
        }
        Ok(SampledField { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        let n = grid.len();
        SampledField {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Sample a function at every node.
    pub fn from_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let n = grid.len();
        let values = crate::exec::par_map_indexed(n, |i| f(&grid.point_at(i)));
        SampledField { grid, values }
    }

    /// Sample a real-valued function at every node.
    pub fn from_real_fn<F>(grid: Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Pointwise map preserving the grid.
    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(Complex64) -> Complex64,
    {
        SampledField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise sum; grids must match.
    pub fn add(&self, other: &SampledField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::DimensionMismatch {
                expected: self.grid.len(),
                got: other.grid.len(),
            });
        }
        Ok(SampledField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Scale by a complex constant.
    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Max modulus over all samples.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus on the outermost cell shell, relative to the max
    /// modulus; small values mean the field has decayed at the boundary.
    pub fn boundary_decay(&self) -> f64 {
        let sup = self.max_abs();
        if sup == 0.0 {
            return 0.0;
        }
        let dim = self.grid.dim();
        let mut edge: f64 = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let idx = self.grid.multi_index(i);
            let on_edge = (0..dim).any(|k| {
                idx[k] == 0 || idx[k] + 1 == self.grid.axis(k).samples
            });
            if on_edge {
                edge = edge.max(v.norm());
            }
        }
        edge / sup
    }
}
