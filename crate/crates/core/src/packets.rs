//! Oriented boxes, dual boxes, wave-packet families with
//! analysis/synthesis, and Monte Carlo overlap volumes.
//!
//! A packet family for a frequency box `B` tessellates space with
//! translates of the dual box of `2B`. The shared window has a plateau
//! spectrum equal to 1 on `B` and supported in `2B`; on a torus whose
//! widths are integer multiples of the tile sides the analysis/synthesis
//! pair below reconstructs any `B`-band-limited field exactly.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::{plateau, transform, transform_onto, Direction, Grid, SampledField};
use crate::Complex64;

/// A box with arbitrary center, orthonormal axes, and per-axis half
/// lengths.
#[derive(Debug, Clone)]
pub struct OrientedBox {
    center: Vec<f64>,
    axes: Vec<Vec<f64>>,
    half_lengths: Vec<f64>,
}

impl OrientedBox {
    pub fn new(center: Vec<f64>, axes: Vec<Vec<f64>>, half_lengths: Vec<f64>) -> Result<Self> {
        let n = center.len();
        if axes.len() != n || half_lengths.len() != n || axes.iter().any(|a| a.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: axes.len(),
            });
        }
        if half_lengths.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::Unresolvable {
                reason: "half lengths must be positive".into(),
            });
        }
        let defect = linalg::gram_defect(&axes);
        if defect > 1e-12 {
            return Err(Error::NotOrthonormal { defect });
        }
        Ok(OrientedBox {
            center,
            axes,
            half_lengths,
        })
    }

    pub fn axis_aligned(center: Vec<f64>, half_lengths: Vec<f64>) -> Result<Self> {
        let n = center.len();
        let axes = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        OrientedBox::new(center, axes, half_lengths)
    }

    /// Two-dimensional box rotated by `angle` radians.
    pub fn rotated_2d(center: Vec<f64>, half_lengths: Vec<f64>, angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        OrientedBox::new(center, vec![vec![c, s], vec![-s, c]], half_lengths)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn half_lengths(&self) -> &[f64] {
        &self.half_lengths
    }

    pub fn volume(&self) -> f64 {
        self.half_lengths.iter().map(|h| 2.0 * h).product()
    }

    /// Coordinates in the box frame: `axes^T (x - center)`.
    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        let shifted: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        linalg::apply_transpose(&self.axes, &shifted)
    }

    pub fn from_local(&self, u: &[f64]) -> Vec<f64> {
        let mut x = linalg::apply_columns(&self.axes, u);
        for (xi, ci) in x.iter_mut().zip(&self.center) {
            *xi += ci;
        }
        x
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.to_local(x)
            .iter()
            .zip(&self.half_lengths)
            .all(|(u, h)| u.abs() <= *h)
    }

    /// Same center and axes, half lengths scaled by `factor`.
    pub fn dilate(&self, factor: f64) -> OrientedBox {
        OrientedBox {
            center: self.center.clone(),
            axes: self.axes.clone(),
            half_lengths: self.half_lengths.iter().map(|h| h * factor).collect(),
        }
    }

    /// Index of the longest axis.
    pub fn long_axis(&self) -> usize {
        let mut best = 0;
        for i in 1..self.half_lengths.len() {
            if self.half_lengths[i] > self.half_lengths[best] {
                best = i;
            }
        }
        best
    }
}

/// Dual box: same axes, center at the origin, side lengths reciprocal
/// per axis (`side_j * dual_side_j = 1`, so `half -> 1/(4 half)`).
pub fn dual_box(b: &OrientedBox) -> OrientedBox {
    OrientedBox {
        center: vec![0.0; b.dim()],
        axes: b.axes.clone(),
        half_lengths: b.half_lengths.iter().map(|h| 0.25 / h).collect(),
    }
}

/// Smooth frequency window adapted to `B`: 1 on `B`, 0 outside `2B`,
/// a tensor plateau in the box frame.
pub fn frequency_window(b: &OrientedBox, xi: &[f64]) -> f64 {
    b.to_local(xi)
        .iter()
        .zip(&b.half_lengths)
        .map(|(v, h)| plateau(v.abs() / h, 1.0, 2.0))
        .product()
}

/// One-dimensional spatial profile of the plateau window: the transform
/// `∫ plateau(|u|) e^{2πi u t} du` over the support `[-2, 2]`. Real and
/// even; evaluated by a trapezoid rule whose error is spectral because
/// the integrand is smooth and compactly supported.
pub fn window_profile(t: f64) -> f64 {
    const NODES: usize = 1024;
    let h = 2.0 / NODES as f64;
    let mut acc = 0.5; // u = 0 contributes plateau(0) = 1, half weight x2 below
    for j in 1..NODES {
        let u = j as f64 * h;
        acc += plateau(u, 1.0, 2.0) * (2.0 * PI * u * t).cos();
    }
    2.0 * acc * h
}

/// A tessellation of space by translates of the dual box of `2B`,
/// together with the shared spectral window.
#[derive(Debug, Clone)]
pub struct PacketFamily {
    base: OrientedBox,
    tile_half: Vec<f64>,
    centers: Vec<Vec<f64>>,
}

/// Coefficients of a field in a packet family, aligned with
/// `family.centers()`.
#[derive(Debug, Clone)]
pub struct PacketCoefficients {
    pub weights: Vec<Complex64>,
}

impl PacketCoefficients {
    pub fn energy(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum()
    }
}

impl PacketFamily {
    pub fn base(&self) -> &OrientedBox {
        &self.base
    }

    /// The common tile as an oriented box centered at a given lattice
    /// point.
    pub fn tile_at(&self, index: usize) -> OrientedBox {
        OrientedBox {
            center: self.centers[index].clone(),
            axes: self.base.axes.clone(),
            half_lengths: self.tile_half.clone(),
        }
    }

    pub fn centers(&self) -> &[Vec<f64>] {
        &self.centers
    }

    pub fn tile_volume(&self) -> f64 {
        self.tile_half.iter().map(|h| 2.0 * h).product()
    }

    /// Value of the packet `W_T` for tile `index` at a point `x`:
    /// `|T|^{1/2} e^{2πi c_B (x - u_T)} Π h_i ŵ(h_i ((x - u_T) in frame)_i)`.
    pub fn packet_value(&self, index: usize, x: &[f64]) -> Complex64 {
        let u_t = &self.centers[index];
        let shifted: Vec<f64> = x.iter().zip(u_t).map(|(a, b)| a - b).collect();
        let local = linalg::apply_transpose(&self.base.axes, &shifted);
        let mut magnitude = self.tile_volume().sqrt();
        for (v, h) in local.iter().zip(&self.base.half_lengths) {
            magnitude *= h * window_profile(h * v);
        }
        let phase: f64 = self
            .base
            .center
            .iter()
            .zip(&shifted)
            .map(|(c, s)| c * s)
            .sum();
        Complex::from_polar(1.0, 2.0 * PI * phase) * magnitude
    }

    /// The packet for tile `index` realized as a field on `grid` by
    /// sampling its spectrum `|T|^{1/2} e^{-2πi u_T ξ} η̂(ξ)` on the
    /// reciprocal bins and inverting. On the torus this is the exact
    /// packet: its discrete spectrum is supported precisely on the window
    /// bins inside `2B`.
    pub fn packet_field(&self, index: usize, grid: &Grid) -> Result<SampledField> {
        let recip = grid.reciprocal();
        let u_t = &self.centers[index];
        let root_t = self.tile_volume().sqrt();
        let mut spec = SampledField::zeros(recip.clone());
        for (i, v) in spec.values_mut().iter_mut().enumerate() {
            let xi = recip.point_at(i);
            let w = frequency_window(&self.base, &xi);
            if w > 0.0 {
                let phase: f64 = xi.iter().zip(u_t).map(|(a, b)| a * b).sum();
                *v = Complex::from_polar(root_t * w, -2.0 * PI * phase);
            }
        }
        transform_onto(&spec, Direction::Inverse, grid)
    }
}

/// Tessellation of `extent` by dual boxes of `2B`: all lattice translates
/// whose centers fall inside the extent box.
pub fn packet_family(b: &OrientedBox, extent: &[(f64, f64)]) -> Result<PacketFamily> {
    let n = b.dim();
    if extent.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: extent.len(),
        });
    }
    for (k, &(lo, hi)) in extent.iter().enumerate() {
        if !(lo < hi) {
            return Err(Error::DegenerateBox { axis: k, lo, hi });
        }
    }
    let tile_half: Vec<f64> = b.half_lengths.iter().map(|h| 0.25 / (2.0 * h)).collect();
    let sides: Vec<f64> = tile_half.iter().map(|h| 2.0 * h).collect();
    // lattice ranges from the extent corners projected onto the axes
    let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(n);
    for i in 0..n {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for corner in 0..(1usize << n) {
            let x: Vec<f64> = (0..n)
                .map(|k| {
                    if (corner >> k) & 1 == 1 {
                        extent[k].1
                    } else {
                        extent[k].0
                    }
                })
                .collect();
            let proj = linalg::dot(&b.axes[i], &x);
            lo = lo.min(proj);
            hi = hi.max(proj);
        }
        ranges.push(((lo / sides[i]).floor() as i64, (hi / sides[i]).ceil() as i64));
    }
    let mut centers = Vec::new();
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'outer: loop {
        let coeff: Vec<f64> = idx
            .iter()
            .zip(&sides)
            .map(|(&k, &s)| k as f64 * s)
            .collect();
        let u = linalg::apply_columns(&b.axes, &coeff);
        let inside = u
            .iter()
            .zip(extent)
            .all(|(&c, &(lo, hi))| c >= lo && c <= hi);
        if inside {
            centers.push(u);
        }
        let mut axis = 0;
        loop {
            idx[axis] += 1;
            if idx[axis] <= ranges[axis].1 {
                break;
            }
            idx[axis] = ranges[axis].0;
            axis += 1;
            if axis == n {
                break 'outer;
            }
        }
    }
    if centers.is_empty() {
        return Err(Error::DegenerateExtent);
    }
    Ok(PacketFamily {
        base: b.clone(),
        tile_half,
        centers,
    })
}

/// Packet family commensurate with a field grid: axis-aligned `B`, tile
/// sides snapped to exact divisors of the torus widths so that the
/// analysis/synthesis pair is an exact expansion.
pub fn packet_family_on_grid(b: &OrientedBox, grid: &Grid) -> Result<PacketFamily> {
    let n = b.dim();
    if grid.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: grid.dim(),
        });
    }
    if linalg::gram_defect(&b.axes) > 1e-12
        || b.axes
            .iter()
            .enumerate()
            .any(|(i, a)| (a[i].abs() - 1.0).abs() > 1e-12)
    {
        return Err(Error::Unresolvable {
            reason: "grid tessellations require an axis-aligned base box".into(),
        });
    }
    let mut tile_half = Vec::with_capacity(n);
    let mut counts = Vec::with_capacity(n);
    for k in 0..n {
        let width = grid.axis(k).hi - grid.axis(k).lo;
        // at least one tile per dual period 1/(2 side(B))
        let m = (width * 4.0 * b.half_lengths[k] - 1e-9).ceil().max(1.0) as usize;
        counts.push(m);
        tile_half.push(0.5 * width / m as f64);
    }
    let mut centers = Vec::new();
    let total: usize = counts.iter().product();
    for flat in 0..total {
        let mut rest = flat;
        let mut u = Vec::with_capacity(n);
        for k in 0..n {
            let j = rest % counts[k];
            rest /= counts[k];
            u.push(grid.axis(k).lo + (j as f64 + 0.5) * 2.0 * tile_half[k]);
        }
        centers.push(u);
    }
    Ok(PacketFamily {
        base: b.clone(),
        tile_half,
        centers,
    })
}

/// Relative spectral mass of `spectrum` outside the box `b`.
pub fn spectral_mass_outside(spectrum: &SampledField, b: &OrientedBox) -> f64 {
    let grid = spectrum.grid();
    let mut inside = 0.0;
    let mut total = 0.0;
    for (i, v) in spectrum.values().iter().enumerate() {
        let e = v.norm_sqr();
        total += e;
        if b.contains(&grid.point_at(i)) {
            inside += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        (total - inside) / total
    }
}

/// Analysis/synthesis in a packet family.
///
/// Returns the coefficients `w_T = <F, W_T>` and the relative `L²` defect
/// of the reconstruction `Σ w_T W_T` against `F`. The input must be
/// band-limited to the family's base box up to relative mass `1e-8`.
pub fn packet_transform(
    field: &SampledField,
    family: &PacketFamily,
) -> Result<(PacketCoefficients, f64)> {
    let spectrum = transform(field, Direction::Forward)?;
    let mass_out = spectral_mass_outside(&spectrum, &family.base);
    if mass_out > 1e-8 {
        return Err(Error::BandLimit { mass: mass_out });
    }
    let grid = spectrum.grid();
    let window2 = family.base.dilate(2.0);
    // bins carrying window weight
    let mut bins: Vec<(usize, Vec<f64>, f64)> = Vec::new();
    for i in 0..grid.len() {
        let xi = grid.point_at(i);
        if window2.contains(&xi) {
            let w = frequency_window(&family.base, &xi);
            if w > 0.0 {
                bins.push((i, xi, w));
            }
        }
    }
    let cell = grid.cell_volume();
    let root_t = family.tile_volume().sqrt();
    let weights: Vec<Complex64> = crate::exec::par_map_indexed(family.centers.len(), |t| {
        let u = &family.centers[t];
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, xi, w) in &bins {
            let phase: f64 = xi.iter().zip(u).map(|(a, b)| a * b).sum();
            acc += spectrum.values()[*i] * *w * Complex::from_polar(1.0, 2.0 * PI * phase);
        }
        acc * cell * root_t
    });
    // synthesis on the same spectral bins
    let mut recon_spec = SampledField::zeros(grid.clone());
    for (i, xi, w) in &bins {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, u) in family.centers.iter().enumerate() {
            let phase: f64 = xi.iter().zip(u).map(|(a, b)| a * b).sum();
            acc += weights[t] * Complex::from_polar(1.0, -2.0 * PI * phase);
        }
        recon_spec.values_mut()[*i] = acc * *w * root_t;
    }
    let recon = transform_onto(&recon_spec, Direction::Inverse, field.grid())?;
    let mut err = 0.0;
    let mut norm = 0.0;
    for (a, b) in field.values().iter().zip(recon.values()) {
        err += (a - b).norm_sqr();
        norm += a.norm_sqr();
    }
    let defect = if norm == 0.0 {
        0.0
    } else {
        (err / norm).sqrt()
    };
    Ok((PacketCoefficients { weights }, defect))
}

/// Monte Carlo overlap volume of two oriented boxes.
#[derive(Debug, Clone)]
pub struct OverlapVolume {
    pub volume: f64,
    /// Angle between the long axes, in `[0, π/2]`.
    pub nu: f64,
    /// One-sigma Monte Carlo error estimate.
    pub standard_error: f64,
    /// False when the long axes are essentially parallel.
    pub transverse: bool,
    pub samples: usize,
}

/// Volume of `t1 ∩ t2` by counter-seeded Monte Carlo over the smaller
/// box; the stream depends only on `(seed, sample index)` so the result
/// is independent of worker count.
pub fn overlap_volume(t1: &OrientedBox, t2: &OrientedBox, seed: u64) -> Result<OverlapVolume> {
    if t1.dim() != t2.dim() {
        return Err(Error::DimensionMismatch {
            expected: t1.dim(),
            got: t2.dim(),
        });
    }
    let n = t1.dim();
    let (small, big) = if t1.volume() <= t2.volume() {
        (t1, t2)
    } else {
        (t2, t1)
    };
    const SAMPLES: usize = 400_000;
    let hits: usize = crate::exec::par_map_indexed(SAMPLES, |i| {
        let mut local = Vec::with_capacity(n);
        for k in 0..n {
            let u = crate::rng::counter_uniform(seed, &[i as u64, k as u64]);
            local.push((2.0 * u - 1.0) * small.half_lengths[k]);
        }
        let x = small.from_local(&local);
        usize::from(big.contains(&x))
    })
    .into_iter()
    .sum();
    let p = hits as f64 / SAMPLES as f64;
    let volume = small.volume() * p;
    let standard_error = small.volume() * (p * (1.0 - p) / SAMPLES as f64).sqrt();
    let a = &t1.axes[t1.long_axis()];
    let b = &t2.axes[t2.long_axis()];
    let cos = linalg::dot(a, b).abs().min(1.0);
    let nu = cos.acos();
    Ok(OverlapVolume {
        volume,
        nu,
        standard_error,
        transverse: nu > 1e-9,
        samples: SAMPLES,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_box_reciprocal_sides() {
        let b = OrientedBox::axis_aligned(vec![0.3, -0.7], vec![1.0 / 8.0, 1.0 / 32.0]).unwrap();
        let d = dual_box(&b);
        // sides (1/4, 1/16) -> (4, 16)
        assert!((d.half_lengths()[0] - 2.0).abs() < 1e-15);
        assert!((d.half_lengths()[1] - 8.0).abs() < 1e-15);
        assert_eq!(d.center(), &[0.0, 0.0]);
        assert_eq!(d.axes(), b.axes());
        // unit cube is self-dual
        let unit = OrientedBox::axis_aligned(vec![0.0], vec![0.5]).unwrap();
        assert!((dual_box(&unit).half_lengths()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_orthonormal_axes_rejected() {
        let r = OrientedBox::new(
            vec![0.0, 0.0],
            vec![vec![1.0, 0.1], vec![0.0, 1.0]],
            vec![1.0, 1.0],
        );
        assert!(matches!(r, Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn self_overlap_is_own_volume() {
        let t = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![2.0, 8.0]).unwrap();
        let o = overlap_volume(&t, &t, 5).unwrap();
        assert!((o.volume - 64.0).abs() < 1e-9);
        assert!(!o.transverse); // same axis direction
    }

    #[test]
    fn perpendicular_tubes_overlap_square() {
        // sides (4, 16) crossed at right angles -> 4 x 4 square, volume 16
        let t1 = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![2.0, 8.0]).unwrap();
        let t2 = OrientedBox::rotated_2d(vec![0.0, 0.0], vec![2.0, 8.0], PI / 2.0).unwrap();
        let o = overlap_volume(&t1, &t2, 9).unwrap();
        assert!((o.nu - PI / 2.0).abs() < 1e-12);
        assert!(o.transverse);
        assert!(
            (o.volume - 16.0).abs() <= 0.02 * 16.0,
            "volume {} (expected 16)",
            o.volume
        );
    }

    #[test]
    fn overlap_is_symmetric() {
        let t1 = OrientedBox::axis_aligned(vec![0.5, 0.0], vec![2.0, 8.0]).unwrap();
        let t2 = OrientedBox::rotated_2d(vec![0.0, 0.3], vec![2.0, 8.0], PI / 4.0).unwrap();
        let a = overlap_volume(&t1, &t2, 13).unwrap();
        let b = overlap_volume(&t2, &t1, 14).unwrap();
        let tol = 3.0 * (a.standard_error + b.standard_error);
        assert!((a.volume - b.volume).abs() <= tol);
    }

    #[test]
    fn parallel_tubes_flagged() {
        let t1 = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![2.0, 8.0]).unwrap();
        let t2 = OrientedBox::axis_aligned(vec![1.0, 1.0], vec![2.0, 8.0]).unwrap();
        let o = overlap_volume(&t1, &t2, 3).unwrap();
        assert!(!o.transverse);
        assert!(o.volume > 0.0);
    }

    fn band_limited_field(grid: &Grid, b: &OrientedBox, seed: u64) -> SampledField {
        let recip = grid.reciprocal();
        let mut rng = crate::rng::stream_rng(seed, &[1]);
        let mut spec = SampledField::zeros(recip.clone());
        for (i, v) in spec.values_mut().iter_mut().enumerate() {
            if b.contains(&recip.point_at(i)) {
                *v = crate::rng::complex_gaussian(&mut rng);
            }
        }
        transform_onto(&spec, Direction::Inverse, grid).unwrap()
    }

    #[test]
    fn reconstruction_defect_small_and_energy_comparable() {
        let grid = Grid::centered(2, 16.0, 64).unwrap();
        let b = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![0.5, 0.25]).unwrap();
        let family = packet_family_on_grid(&b, &grid).unwrap();
        for seed in [1u64, 2, 3] {
            let f = band_limited_field(&grid, &b, seed);
            let (coeffs, defect) = packet_transform(&f, &family).unwrap();
            assert!(defect <= 1e-6, "defect {defect}");
            let norm2: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
                * f.grid().cell_volume();
            let ratio = coeffs.energy() / norm2;
            assert!(
                (0.25..=4.0).contains(&ratio),
                "coefficient energy ratio {ratio}"
            );
        }
    }

    #[test]
    fn band_limit_guard_trips() {
        let grid = Grid::centered(2, 16.0, 64).unwrap();
        let b = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![0.5, 0.25]).unwrap();
        let family = packet_family_on_grid(&b, &grid).unwrap();
        let wide = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![1.5, 1.0]).unwrap();
        let f = band_limited_field(&grid, &wide, 4);
        assert!(matches!(
            packet_transform(&f, &family),
            Err(Error::BandLimit { .. })
        ));
    }

    #[test]
    fn coefficients_linear_in_field() {
        let grid = Grid::centered(2, 8.0, 32).unwrap();
        let b = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![0.5, 0.5]).unwrap();
        let family = packet_family_on_grid(&b, &grid).unwrap();
        let f = band_limited_field(&grid, &b, 7);
        let g = band_limited_field(&grid, &b, 8);
        let alpha = Complex64::new(0.7, -1.1);
        let combo = SampledField::new(
            grid.clone(),
            f.values()
                .iter()
                .zip(g.values())
                .map(|(a, c)| a * alpha + c)
                .collect(),
        )
        .unwrap();
        let (wf, _) = packet_transform(&f, &family).unwrap();
        let (wg, _) = packet_transform(&g, &family).unwrap();
        let (wc, _) = packet_transform(&combo, &family).unwrap();
        for t in 0..wc.weights.len() {
            let want = wf.weights[t] * alpha + wg.weights[t];
            assert!((wc.weights[t] - want).norm() <= 1e-12 * (want.norm() + 1.0));
        }
    }

    #[test]
    fn packet_norms_and_envelope() {
        let grid = Grid::centered(2, 16.0, 64).unwrap();
        let b = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![0.5, 0.25]).unwrap();
        let family = packet_family_on_grid(&b, &grid).unwrap();
        // a tile near the box center so periodized tails stay far away
        let t = family
            .centers()
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let na: f64 = a.iter().map(|c| c * c).sum();
                let nb: f64 = b.iter().map(|c| c * c).sum();
                na.total_cmp(&nb)
            })
            .map(|(i, _)| i)
            .unwrap();
        let tile = family.tile_at(t);
        let w = family.packet_field(t, &grid).unwrap();
        let mut norm2 = 0.0;
        let mut envelope_c: f64 = 0.0;
        for i in 0..grid.len() {
            let x = grid.point_at(i);
            let v = w.values()[i];
            norm2 += v.norm_sqr() * grid.cell_volume();
            let z = tile
                .to_local(&x)
                .iter()
                .zip(tile.half_lengths())
                .map(|(u, h)| (u / h) * (u / h))
                .sum::<f64>()
                .sqrt();
            let bound = family.tile_volume().powf(-0.5) * (1.0 + z).powi(-4);
            if bound > 0.0 {
                envelope_c = envelope_c.max(v.norm() / bound);
            }
        }
        let norm = norm2.sqrt();
        assert!(
            (0.5..=2.0).contains(&norm),
            "packet L2 norm {norm} outside [1/2, 2]"
        );
        assert!(envelope_c.is_finite() && envelope_c > 0.0);
        // on-grid packet agrees with the closed form at the node nearest
        // the tile center (difference is pure periodization tail)
        let c = tile.center().to_vec();
        let idx: Vec<usize> = (0..2)
            .map(|k| {
                let a = grid.axis(k);
                (((c[k] - a.lo) / a.spacing - 0.5).round() as usize).min(a.samples - 1)
            })
            .collect();
        let flat = grid.flat_index(&idx);
        let x = grid.point_at(flat);
        let closed = family.packet_value(t, &x);
        let sampled = w.values()[flat];
        assert!(
            (closed - sampled).norm() <= 1e-3 * closed.norm().max(1e-12),
            "closed {closed} vs sampled {sampled}"
        );
    }

    #[test]
    fn window_spectrum_supported_in_double_box() {
        let grid = Grid::centered(2, 16.0, 64).unwrap();
        let b = OrientedBox::axis_aligned(vec![0.0, 0.0], vec![0.5, 0.25]).unwrap();
        let family = packet_family_on_grid(&b, &grid).unwrap();
        let w = family.packet_field(0, &grid).unwrap();
        let spec = transform(&w, Direction::Forward).unwrap();
        let mass_out = spectral_mass_outside(&spec, &b.dilate(2.0));
        assert!(mass_out <= 1e-8, "mass outside 2B: {mass_out}");
    }
}
