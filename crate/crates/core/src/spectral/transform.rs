//! Riemann-sum discrete Fourier transforms.
//!
//! `transform` runs one FFT per axis with pre/post twiddle factors so that
//! the result equals the plain quadrature sum
//! `Π h · Σ_j f(x_j) e^{∓2πi x_j·ξ_k}` to rounding. `transform_at` is the
//! same sum evaluated directly at arbitrary points; it is the slow
//! reference path and the oracle the fast path is tested against.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{Grid, SampledField};
use crate::error::{Error, Result};
use crate::Complex64;

/// Transform direction: `Forward` uses phase `e^{-2πi x·ξ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

/// Transform onto the reciprocal grid of the input.
pub fn transform(field: &SampledField, direction: Direction) -> Result<SampledField> {
    let target = field.grid().reciprocal();
    transform_onto(field, direction, &target)
}

/// Transform onto an explicit target grid.
///
/// The target must have the same sample counts and satisfy
/// `h_src · h_dst · N = 1` per axis (any box offset is allowed); the
/// composition `transform_onto(transform(f), Inverse, f.grid())` then
/// reproduces `f` exactly up to rounding, on any grid.
pub fn transform_onto(
    field: &SampledField,
    direction: Direction,
    target: &Grid,
) -> Result<SampledField> {
    let src = field.grid();
    if !src.reciprocal_compatible(target) {
        return Err(Error::Unresolvable {
            reason: "target grid is not reciprocal-compatible with the source".into(),
        });
    }
    let s = direction.sign();
    let dim = src.dim();
    let mut values = field.values().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    for axis in 0..dim {
        let n = src.axis(axis).samples;
        let fft: Arc<dyn Fft<f64>> = match direction {
            Direction::Forward => planner.plan_fft_forward(n),
            Direction::Inverse => planner.plan_fft_inverse(n),
        };
        let h = src.axis(axis).spacing;
        let a = src.axis(axis).lo + 0.5 * h; // first source node
        let q = target.axis(axis).lo + 0.5 * target.axis(axis).spacing; // first target node
        let pre: Vec<Complex64> = (0..n)
            .map(|j| Complex::from_polar(1.0, s * 2.0 * PI * (j as f64) * h * q))
            .collect();
        let post: Vec<Complex64> = (0..n)
            .map(|k| {
                let xi = q + k as f64 * target.axis(axis).spacing;
                Complex::from_polar(1.0, s * 2.0 * PI * a * xi) * h
            })
            .collect();
        apply_axis(&mut values, src, axis, |line| {
            for (v, p) in line.iter_mut().zip(&pre) {
                *v *= p;
            }
            fft.process(line);
            for (v, p) in line.iter_mut().zip(&post) {
                *v *= p;
            }
        });
    }
    SampledField::new(target.clone(), values)
}

/// Direct-summation transform evaluated at arbitrary points.
pub fn transform_at(
    field: &SampledField,
    points: &[Vec<f64>],
    direction: Direction,
) -> Result<Vec<Complex64>> {
    let grid = field.grid();
    let dim = grid.dim();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
            });
        }
    }
    let s = direction.sign();
    let w = grid.cell_volume();
    let vals = field.values();
    let out = crate::exec::par_map_indexed(points.len(), |pi| {
        let xi = &points[pi];
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, v) in vals.iter().enumerate() {
            let x = grid.point_at(i);
            let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            acc += v * Complex::from_polar(1.0, s * 2.0 * PI * phase);
        }
        acc * w
    });
    Ok(out)
}

/// Run `f` on every 1-D line of `values` along `axis` (gather/scatter).
fn apply_axis<F>(values: &mut [Complex64], grid: &Grid, axis: usize, mut f: F)
where
    F: FnMut(&mut [Complex64]),
{
    let dim = grid.dim();
    let n = grid.axis(axis).samples;
    // stride between consecutive entries along `axis` in row-major order
    let stride: usize = (axis + 1..dim).map(|k| grid.axis(k).samples).product();
    let lines = values.len() / n;
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    for line in 0..lines {
        // `line` indexes the product of all other axes; split it into the
        // block of slower axes and the offset within faster axes.
        let block = line / stride;
        let offset = line % stride;
        let base = block * stride * n + offset;
        for j in 0..n {
            scratch[j] = values[base + j * stride];
        }
        f(&mut scratch);
        for j in 0..n {
            values[base + j * stride] = scratch[j];
        }
    }
}
