//! Graph hypersurfaces `(ξ, ψ(ξ))` over a box domain, their differential
//! geometry, and oscillatory integrals against the pullback measure.
//!
//! The pullback measure transports Lebesgue measure from the parameter
//! domain `U` through the graph map; no area Jacobian is applied anywhere.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::Grid;
use crate::Complex64;

/// Built-in graph functions.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    /// `ψ(ξ) = |ξ|^2`.
    Paraboloid,
    /// `ψ(ξ) = ±sqrt(1 - |ξ|^2)`; the domain must stay strictly inside
    /// the unit ball.
    Hemisphere { negative: bool },
    /// One-dimensional polynomial graph `ψ(ξ) = Σ c_k ξ^k`.
    PolynomialCurve { coeffs: Vec<f64> },
    /// `ψ(ξ) = g·ξ + offset`; zero Hessian everywhere.
    Affine { gradient: Vec<f64>, offset: f64 },
}

/// A graph hypersurface `{(ξ, ψ(ξ)) : ξ ∈ U}` in `R^n`, `U ⊂ R^{n-1}`.
#[derive(Debug, Clone)]
pub struct Hypersurface {
    kind: SurfaceKind,
    domain: Vec<(f64, f64)>,
    /// Measured sup over a dense sample of `|ψ|`, `|∇ψ|`, and Hessian
    /// entries; an upper bound for the C² size of the graph function.
    smoothness_bound: f64,
}

impl Hypersurface {
    pub fn new(kind: SurfaceKind, domain: Vec<(f64, f64)>) -> Result<Self> {
        if domain.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for (k, &(lo, hi)) in domain.iter().enumerate() {
            if !(lo < hi) {
                return Err(Error::DegenerateBox { axis: k, lo, hi });
            }
        }
        match &kind {
            SurfaceKind::Hemisphere { .. } => {
                let sup: f64 = domain
                    .iter()
                    .map(|&(lo, hi)| lo.abs().max(hi.abs()).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if sup >= 1.0 {
                    return Err(Error::HemisphereDomain { sup });
                }
            }
            SurfaceKind::PolynomialCurve { .. } => {
                if domain.len() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: domain.len(),
                    });
                }
            }
            SurfaceKind::Affine { gradient, .. } => {
                if gradient.len() != domain.len() {
                    return Err(Error::DimensionMismatch {
                        expected: domain.len(),
                        got: gradient.len(),
                    });
                }
            }
            SurfaceKind::Paraboloid => {}
        }
        let mut surface = Hypersurface {
            kind,
            domain,
            smoothness_bound: 0.0,
        };
        surface.smoothness_bound = surface.measure_c2_bound(24);
        Ok(surface)
    }

    /// Parabola `ψ(ξ) = ξ^2` over an interval; ambient dimension 2.
    pub fn parabola(lo: f64, hi: f64) -> Result<Self> {
        Hypersurface::new(SurfaceKind::Paraboloid, vec![(lo, hi)])
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    /// Dimension of the parameter domain `U`.
    pub fn domain_dim(&self) -> usize {
        self.domain.len()
    }

    /// Ambient dimension `n = dim U + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.domain.len() + 1
    }

    pub fn smoothness_bound(&self) -> f64 {
        self.smoothness_bound
    }

    /// Lebesgue measure of `U`.
    pub fn domain_measure(&self) -> f64 {
        self.domain.iter().map(|&(lo, hi)| hi - lo).product()
    }

    pub fn contains(&self, xi: &[f64]) -> bool {
        xi.len() == self.domain.len()
            && xi
                .iter()
                .zip(&self.domain)
                .all(|(&x, &(lo, hi))| x >= lo && x <= hi)
    }

    fn check_point(&self, xi: &[f64]) -> Result<()> {
        if xi.len() != self.domain.len() {
            return Err(Error::DimensionMismatch {
                expected: self.domain.len(),
                got: xi.len(),
            });
        }
        if !self.contains(xi) {
            return Err(Error::OutsideDomain { point: xi.to_vec() });
        }
        if matches!(self.kind, SurfaceKind::Hemisphere { .. }) {
            let r2: f64 = xi.iter().map(|x| x * x).sum();
            if r2 >= 1.0 {
                return Err(Error::OutsideDomain { point: xi.to_vec() });
            }
        }
        Ok(())
    }

    /// Graph height `ψ(ξ)`; assumes `ξ ∈ U`.
    pub fn height(&self, xi: &[f64]) -> f64 {
        match &self.kind {
            SurfaceKind::Paraboloid => xi.iter().map(|x| x * x).sum(),
            SurfaceKind::Hemisphere { negative } => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                let v = (1.0 - r2).max(0.0).sqrt();
                if *negative {
                    -v
                } else {
                    v
                }
            }
            SurfaceKind::PolynomialCurve { coeffs } => {
                let x = xi[0];
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            }
            SurfaceKind::Affine { gradient, offset } => linalg::dot(gradient, xi) + offset,
        }
    }

    /// Gradient `∇ψ(ξ)`.
    pub fn gradient(&self, xi: &[f64]) -> Vec<f64> {
        match &self.kind {
            SurfaceKind::Paraboloid => xi.iter().map(|x| 2.0 * x).collect(),
            SurfaceKind::Hemisphere { negative } => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                let w = (1.0 - r2).sqrt();
                let s = if *negative { -1.0 } else { 1.0 };
                xi.iter().map(|x| -s * x / w).collect()
            }
            SurfaceKind::PolynomialCurve { coeffs } => {
                let x = xi[0];
                let mut d = 0.0;
                for (k, &c) in coeffs.iter().enumerate().skip(1) {
                    d += k as f64 * c * x.powi(k as i32 - 1);
                }
                vec![d]
            }
            SurfaceKind::Affine { gradient, .. } => gradient.clone(),
        }
    }

    /// Hessian `[∂_i ∂_j ψ(ξ)]`, row-major `d x d`.
    pub fn hessian(&self, xi: &[f64]) -> Vec<Vec<f64>> {
        let d = self.domain.len();
        match &self.kind {
            SurfaceKind::Paraboloid => (0..d)
                .map(|i| (0..d).map(|j| if i == j { 2.0 } else { 0.0 }).collect())
                .collect(),
            SurfaceKind::Hemisphere { negative } => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                let w = (1.0 - r2).sqrt();
                let w3 = w * w * w;
                let s = if *negative { -1.0 } else { 1.0 };
                (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let kron = if i == j { 1.0 / w } else { 0.0 };
                                -s * (kron + xi[i] * xi[j] / w3)
                            })
                            .collect()
                    })
                    .collect()
            }
            SurfaceKind::PolynomialCurve { coeffs } => {
                let x = xi[0];
                let mut dd = 0.0;
                for (k, &c) in coeffs.iter().enumerate().skip(2) {
                    dd += (k * (k - 1)) as f64 * c * x.powi(k as i32 - 2);
                }
                vec![vec![dd]]
            }
            SurfaceKind::Affine { .. } => vec![vec![0.0; d]; d],
        }
    }

    /// Value, gradient and Hessian at `ξ ∈ U`.
    pub fn eval(&self, xi: &[f64]) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
        self.check_point(xi)?;
        Ok((self.height(xi), self.gradient(xi), self.hessian(xi)))
    }

    /// Gaussian curvature of the graph at `ξ`.
    ///
    /// At critical points this is `det Hess ψ`; elsewhere the
    /// rotation-invariant graph formula
    /// `det Hess ψ / (1 + |∇ψ|^2)^{(n+1)/2}` is used, which agrees with
    /// the critical-point value and assigns the unit sphere curvature 1.
    pub fn gaussian_curvature(&self, xi: &[f64]) -> Result<f64> {
        self.check_point(xi)?;
        let grad = self.gradient(xi);
        let hess = self.hessian(xi);
        let cols: Vec<Vec<f64>> = (0..hess.len())
            .map(|j| hess.iter().map(|row| row[j]).collect())
            .collect();
        let det = linalg::det_from_columns(&cols);
        let g2: f64 = grad.iter().map(|g| g * g).sum();
        if g2 == 0.0 {
            return Ok(det);
        }
        let n = self.ambient_dim() as f64;
        Ok(det / (1.0 + g2).powf((n + 1.0) / 2.0))
    }

    /// Upward unit normal `(-∇ψ, 1) / sqrt(1 + |∇ψ|^2)`.
    pub fn unit_normal(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.check_point(xi)?;
        let grad = self.gradient(xi);
        let scale = 1.0 / (1.0 + grad.iter().map(|g| g * g).sum::<f64>()).sqrt();
        let mut n: Vec<f64> = grad.iter().map(|g| -g * scale).collect();
        n.push(scale);
        Ok(n)
    }

    fn measure_c2_bound(&self, samples_per_axis: usize) -> f64 {
        let d = self.domain.len();
        let total: usize = samples_per_axis.pow(d as u32);
        let mut sup: f64 = 0.0;
        for flat in 0..total {
            let mut rest = flat;
            let mut xi = vec![0.0; d];
            for k in (0..d).rev() {
                let j = rest % samples_per_axis;
                rest /= samples_per_axis;
                let (lo, hi) = self.domain[k];
                xi[k] = lo + (j as f64 + 0.5) * (hi - lo) / samples_per_axis as f64;
            }
            if matches!(self.kind, SurfaceKind::Hemisphere { .. })
                && xi.iter().map(|x| x * x).sum::<f64>() >= 1.0
            {
                continue;
            }
            sup = sup.max(self.height(&xi).abs());
            for g in self.gradient(&xi) {
                sup = sup.max(g.abs());
            }
            for row in self.hessian(&xi) {
                for e in row {
                    sup = sup.max(e.abs());
                }
            }
        }
        sup
    }
}

/// Modulus of the determinant of `n` unit normals in `R^n`.
///
/// Invariant under permutation of the inputs; zero when any two normals
/// coincide.
pub fn transversality(normals: &[Vec<f64>]) -> Result<f64> {
    let n = normals.len();
    for v in normals {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    Ok(linalg::det_from_columns(normals).abs())
}

/// Minimum transversality over all tuples of sample points drawn from the
/// patches' parameter grids (`samples_per_axis` midpoints per axis).
pub fn min_transversality(patches: &[&Hypersurface], samples_per_axis: usize) -> Result<f64> {
    let n = patches.len();
    for p in patches {
        if p.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.ambient_dim(),
            });
        }
    }
    let mut normal_sets: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n);
    for p in patches {
        let d = p.domain_dim();
        let total = samples_per_axis.pow(d as u32);
        let mut set = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rest = flat;
            let mut xi = vec![0.0; d];
            for k in (0..d).rev() {
                let j = rest % samples_per_axis;
                rest /= samples_per_axis;
                let (lo, hi) = p.domain[k];
                xi[k] = lo + (j as f64 + 0.5) * (hi - lo) / samples_per_axis as f64;
            }
            set.push(p.unit_normal(&xi)?);
        }
        normal_sets.push(set);
    }
    let counts: Vec<usize> = normal_sets.iter().map(|s| s.len()).collect();
    let tuples: usize = counts.iter().product();
    if tuples > 20_000_000 {
        return Err(Error::LatticeTooLarge {
            extent: tuples,
            budget: 20_000_000,
        });
    }
    let first = counts[0];
    let rest: usize = tuples / first;
    let mins = crate::exec::par_map_indexed(first, |i0| {
        let mut worst = f64::INFINITY;
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for flat in 0..rest {
            cols.clear();
            cols.push(normal_sets[0][i0].clone());
            let mut r = flat;
            for (k, count) in counts.iter().enumerate().skip(1) {
                cols.push(normal_sets[k][r % count].clone());
                r /= count;
            }
            worst = worst.min(linalg::det_from_columns(&cols).abs());
        }
        worst
    });
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Samples of a function on the surface parameter domain with quadrature
/// weights; the input object of the extension operator.
#[derive(Debug, Clone)]
pub struct Density {
    surface: Hypersurface,
    grid: Grid,
    values: Vec<Complex64>,
    weights: Vec<f64>,
}

impl Density {
    /// Midpoint-rule density with constant value 1.
    pub fn uniform(surface: &Hypersurface, samples_per_axis: usize) -> Result<Self> {
        Density::from_fn(surface, samples_per_axis, |_| Complex64::new(1.0, 0.0))
    }

    /// Midpoint-rule density sampling `f` on `U`'s grid.
    pub fn from_fn<F>(surface: &Hypersurface, samples_per_axis: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let grid = Grid::new(
            surface.domain(),
            &vec![samples_per_axis; surface.domain_dim()],
        )?;
        let w = grid.cell_volume();
        let values: Vec<Complex64> = (0..grid.len()).map(|i| f(&grid.point_at(i))).collect();
        let weights = vec![w; grid.len()];
        Ok(Density {
            surface: surface.clone(),
            grid,
            values,
            weights,
        })
    }

    /// Density over an explicit sub-grid of `U` with explicit weights.
    pub fn with_parts(
        surface: &Hypersurface,
        grid: Grid,
        values: Vec<Complex64>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != grid.len() || weights.len() != grid.len() {
            return Err(Error::ValueCountMismatch {
                got: values.len(),
                want: grid.len(),
            });
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Unresolvable {
                reason: "quadrature weights must be positive".into(),
            });
        }
        Ok(Density {
            surface: surface.clone(),
            grid,
            values,
            weights,
        })
    }

    pub fn surface(&self) -> &Hypersurface {
        &self.surface
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

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature `L^p` norm of the samples on `U`.
    pub fn norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::BadNormExponent { p });
        }
        if p == f64::INFINITY {
            return Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v.norm().powf(p) * w)
            .sum();
        Ok(s.powf(1.0 / p))
    }

    /// Linear combination `a*self + b*other` on matching grids.
    pub fn linear_combination(
        &self,
        a: Complex64,
        other: &Density,
        b: Complex64,
    ) -> Result<Density> {
        if self.grid != other.grid {
            return Err(Error::ValueCountMismatch {
                got: other.values.len(),
                want: self.values.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Density {
            surface: self.surface.clone(),
            grid: self.grid.clone(),
            values,
            weights: self.weights.clone(),
        })
    }
}

/// Oscillatory-phase resolution guard: every axis spacing must satisfy
/// `|x| h <= 1/4`, otherwise the quadrature cannot see the phase.
pub fn phase_resolved(x_norm: f64, grid: &Grid) -> Result<()> {
    const LIMIT: f64 = 0.25;
    for k in 0..grid.dim() {
        let product = x_norm * grid.axis(k).spacing;
        if product > LIMIT * (1.0 + 1e-12) {
            return Err(Error::PhaseUnresolved {
                axis: k,
                product,
                limit: LIMIT,
            });
        }
    }
    Ok(())
}

/// Fourier transform of the weighted pullback measure at `x ∈ R^n`:
/// quadrature of `∫_U e^{-2πi (x'·ξ + x_n ψ(ξ))} w(ξ) dξ` where `w` is the
/// density's sample values.
pub fn measure_ft(density: &Density, x: &[f64]) -> Result<Complex64> {
    let surface = density.surface();
    if x.len() != surface.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: surface.ambient_dim(),
            got: x.len(),
        });
    }
    let x_norm = linalg::norm(x);
    phase_resolved(x_norm, density.grid())?;
    let d = surface.domain_dim();
    let grid = density.grid();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..grid.len() {
        let xi = grid.point_at(i);
        let mut phase = surface.height(&xi) * x[d];
        for k in 0..d {
            phase += x[k] * xi[k];
        }
        acc += density.values[i] * density.weights[i] * Complex::from_polar(1.0, -2.0 * PI * phase);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_eval_matches_calculus() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let (v, g, h) = s.eval(&[0.5]).unwrap();
        assert_eq!(v, 0.25);
        assert_eq!(g[0], 1.0);
        assert_eq!(h[0][0], 2.0);
    }

    #[test]
    fn hemisphere_top_point() {
        let s = Hypersurface::new(
            SurfaceKind::Hemisphere { negative: false },
            vec![(-0.5, 0.5), (-0.5, 0.5)],
        )
        .unwrap();
        let (v, g, h) = s.eval(&[0.0, 0.0]).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(g, vec![0.0, 0.0]);
        assert_eq!(h[0][0], -1.0);
        assert_eq!(h[1][1], -1.0);
        assert_eq!(h[0][1], 0.0);
    }

    #[test]
    fn hemisphere_rejects_domain_touching_equator() {
        let r = Hypersurface::new(
            SurfaceKind::Hemisphere { negative: false },
            vec![(-1.0, 1.0), (-1.0, 1.0)],
        );
        assert!(matches!(r, Err(Error::HemisphereDomain { .. })));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        use rand::Rng;
        let surfaces = vec![
            Hypersurface::new(SurfaceKind::Paraboloid, vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap(),
            Hypersurface::new(
                SurfaceKind::Hemisphere { negative: false },
                vec![(-0.6, 0.6), (-0.6, 0.6)],
            )
            .unwrap(),
            Hypersurface::new(
                SurfaceKind::PolynomialCurve {
                    coeffs: vec![0.3, -1.0, 0.5, 2.0],
                },
                vec![(-1.0, 1.0)],
            )
            .unwrap(),
        ];
        let mut rng = crate::rng::stream_rng(5, &[0]);
        for s in &surfaces {
            for _trial in 0..20 {
                let xi: Vec<f64> = s
                    .domain()
                    .iter()
                    .map(|&(lo, hi)| {
                        let pad = 0.05 * (hi - lo);
                        rng.gen_range(lo + pad..hi - pad)
                    })
                    .collect();
                if matches!(s.kind(), SurfaceKind::Hemisphere { .. })
                    && xi.iter().map(|x| x * x).sum::<f64>() > 0.5
                {
                    continue;
                }
                let g = s.gradient(&xi);
                let eps = 1e-5;
                for k in 0..xi.len() {
                    let mut plus = xi.clone();
                    let mut minus = xi.clone();
                    plus[k] += eps;
                    minus[k] -= eps;
                    let fd = (s.height(&plus) - s.height(&minus)) / (2.0 * eps);
                    assert!((fd - g[k]).abs() < 1e-6, "fd {fd} analytic {}", g[k]);
                }
            }
        }
    }

    #[test]
    fn curvature_examples() {
        let para3 =
            Hypersurface::new(SurfaceKind::Paraboloid, vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert!((para3.gaussian_curvature(&[0.0, 0.0]).unwrap() - 4.0).abs() < 1e-12);

        let affine = Hypersurface::new(
            SurfaceKind::Affine {
                gradient: vec![0.3, -0.2],
                offset: 1.0,
            },
            vec![(-1.0, 1.0), (-1.0, 1.0)],
        )
        .unwrap();
        assert_eq!(affine.gaussian_curvature(&[0.2, 0.7]).unwrap(), 0.0);

        let hemi = Hypersurface::new(
            SurfaceKind::Hemisphere { negative: false },
            vec![(-0.6, 0.6), (-0.6, 0.6)],
        )
        .unwrap();
        for xi in [[0.0, 0.0], [0.3, -0.2], [0.5, 0.1]] {
            let k = hemi.gaussian_curvature(&xi).unwrap();
            assert!((k - 1.0).abs() < 1e-8, "curvature {k} at {xi:?}");
        }
    }

    #[test]
    fn unit_normal_is_unit_and_matches_parabola() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        for xi in [[-0.5], [0.5], [0.25]] {
            let n = s.unit_normal(&xi).unwrap();
            assert!((linalg::norm(&n) - 1.0).abs() < 1e-12);
        }
        let n = s.unit_normal(&[0.5]).unwrap();
        // (-1, 1)/sqrt(2)
        assert!((n[0] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((n[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn transversality_examples() {
        // orthonormal normals give 1
        let ortho = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert_eq!(transversality(&ortho).unwrap(), 1.0);
        // repeated point gives 0
        let rep = vec![vec![1.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(transversality(&rep).unwrap(), 0.0);
        // parabola normals at +-1/2
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let n1 = s.unit_normal(&[0.5]).unwrap();
        let n2 = s.unit_normal(&[-0.5]).unwrap();
        let nu = transversality(&[n1.clone(), n2.clone()]).unwrap();
        assert!((nu - 1.0).abs() < 1e-12);
        // permutation invariance
        let nu_swapped = transversality(&[n2, n1]).unwrap();
        assert!((nu - nu_swapped).abs() < 1e-15);
    }

    #[test]
    fn min_transversality_orthogonal_affine_patches() {
        let patches: Vec<Hypersurface> = vec![
            Hypersurface::new(
                SurfaceKind::Affine {
                    gradient: vec![0.0, 0.0],
                    offset: 0.0,
                },
                vec![(-0.2, 0.2), (-0.2, 0.2)],
            )
            .unwrap(),
            Hypersurface::new(
                SurfaceKind::Affine {
                    gradient: vec![1e9, 0.0],
                    offset: 0.0,
                },
                vec![(-0.2, 0.2), (-0.2, 0.2)],
            )
            .unwrap(),
            Hypersurface::new(
                SurfaceKind::Affine {
                    gradient: vec![0.0, 1e9],
                    offset: 0.0,
                },
                vec![(-0.2, 0.2), (-0.2, 0.2)],
            )
            .unwrap(),
        ];
        let refs: Vec<&Hypersurface> = patches.iter().collect();
        let nu = min_transversality(&refs, 3).unwrap();
        // normals are essentially e3, -e1, -e2
        assert!((nu - 1.0).abs() < 1e-6, "nu = {nu}");
    }

    #[test]
    fn density_weights_sum_to_domain_measure() {
        let s =
            Hypersurface::new(SurfaceKind::Paraboloid, vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        let d = Density::uniform(&s, 16).unwrap();
        let sum: f64 = d.weights().iter().sum();
        assert!((sum - s.domain_measure()).abs() <= 1e-12 * s.domain_measure());
    }

    #[test]
    fn measure_ft_at_origin_is_domain_measure() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let d = Density::uniform(&s, 64).unwrap();
        let v = measure_ft(&d, &[0.0, 0.0]).unwrap();
        assert!((v.re - 2.0).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn measure_ft_conjugate_symmetry() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let d = Density::from_fn(&s, 64, |xi| {
            Complex64::new(crate::spectral::bump_profile(xi[0] / 0.9), 0.0)
        })
        .unwrap();
        let x = [1.5, -2.0];
        let neg = [-1.5, 2.0];
        let a = measure_ft(&d, &x).unwrap();
        let b = measure_ft(&d, &neg).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn measure_ft_guards_unresolved_phase() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let d = Density::uniform(&s, 64).unwrap();
        // spacing = 2/64 = 1/32; guard trips when |x| > 8
        assert!(matches!(
            measure_ft(&d, &[0.0, 100.0]),
            Err(Error::PhaseUnresolved { .. })
        ));
    }

    #[test]
    fn affine_measure_ft_has_no_decay_along_normal() {
        let s = Hypersurface::new(
            SurfaceKind::Affine {
                gradient: vec![0.0],
                offset: 0.0,
            },
            vec![(-1.0, 1.0)],
        )
        .unwrap();
        for t in [2.0f64, 4.0, 8.0] {
            let d = Density::uniform(&s, 512).unwrap();
            let v = measure_ft(&d, &[0.0, t]).unwrap();
            assert!((v.norm() - 2.0).abs() < 1e-12, "modulus {}", v.norm());
        }
    }

    #[test]
    fn smoothness_bound_dominates_samples() {
        let s =
            Hypersurface::new(SurfaceKind::Paraboloid, vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap();
        // |psi| <= 2, |grad| <= 2 per component, hessian entries 2
        assert!(s.smoothness_bound() >= 2.0);
        assert!(s.smoothness_bound() <= 2.0 + 1e-9);
    }
}
