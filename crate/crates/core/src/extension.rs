//! Extension and restriction operators and their exact discrete
//! relationships.
//!
//! `extend` evaluates the oscillatory quadrature
//! `Σ_j f(ξ_j) w_j e^{2πi (x'·ξ_j + x_n ψ(ξ_j))}` at arbitrary off-grid
//! points by direct summation. `restrict` is the nonuniform Fourier sum of
//! a sampled field evaluated on the graph. On matched quadrature nodes the
//! two discrete sums are exact transposes of each other, which is what
//! `adjoint_defect` measures.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::spectral::{transform_at, Direction, SampledField};
use crate::surface::{phase_resolved, Density, Hypersurface, SurfaceKind};
use crate::Complex64;

/// Evaluation targets in `R^n`; off-grid points are allowed.
#[derive(Debug, Clone)]
pub struct EvalSet {
    points: Vec<Vec<f64>>,
}

impl EvalSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let dim = points[0].len();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteValue { index: 0 });
            }
        }
        Ok(EvalSet { points })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Extension operator: quadrature of
/// `∫_U f(ξ) e^{2πi (x'·ξ + x_n ψ(ξ))} dξ` at each evaluation point.
pub fn extend(density: &Density, points: &EvalSet) -> Result<Vec<Complex64>> {
    let surface = density.surface();
    let n = surface.ambient_dim();
    let d = surface.domain_dim();
    for p in points.points() {
        if p.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        phase_resolved(linalg::norm(p), density.grid())?;
    }
    // precompute nodes, heights and weighted values once
    let grid = density.grid();
    let m = grid.len();
    let mut nodes: Vec<f64> = Vec::with_capacity(m * d);
    let mut heights: Vec<f64> = Vec::with_capacity(m);
    let mut wv: Vec<Complex64> = Vec::with_capacity(m);
    for i in 0..m {
        let xi = grid.point_at(i);
        heights.push(surface.height(&xi));
        nodes.extend_from_slice(&xi);
        wv.push(density.values()[i] * density.weights()[i]);
    }
    let out = crate::exec::par_map_indexed(points.len(), |pi| {
        let x = &points.points()[pi];
        let xn = x[d];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..m {
            let mut phase = xn * heights[i];
            for k in 0..d {
                phase += x[k] * nodes[i * d + k];
            }
            acc += wv[i] * Complex::from_polar(1.0, 2.0 * PI * phase);
        }
        acc
    });
    Ok(out)
}

/// Largest admissible boundary magnitude for `restrict` inputs.
pub const RESTRICT_BOUNDARY_TOL: f64 = 1e-8;

/// Restriction operator: the Fourier transform of `field` evaluated at the
/// graph points `(ξ, ψ(ξ))` for `ξ` on a `samples_per_axis` midpoint grid
/// over `U`. The field must have decayed at its box boundary, otherwise
/// the transform values on the surface are dominated by truncation.
pub fn restrict(
    field: &SampledField,
    surface: &Hypersurface,
    samples_per_axis: usize,
) -> Result<Density> {
    if field.grid().dim() != surface.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: surface.ambient_dim(),
            got: field.grid().dim(),
        });
    }
    let edge = field.boundary_decay();
    if edge > RESTRICT_BOUNDARY_TOL {
        return Err(Error::BoundaryDecay { edge });
    }
    let proto = Density::uniform(surface, samples_per_axis)?;
    restrict_onto(field, &proto)
}

/// Restriction evaluated on the parameter nodes of an existing density;
/// used to match quadratures exactly in adjointness checks.
pub fn restrict_onto(field: &SampledField, quadrature: &Density) -> Result<Density> {
    let surface = quadrature.surface();
    if field.grid().dim() != surface.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: surface.ambient_dim(),
            got: field.grid().dim(),
        });
    }
    let grid = quadrature.grid();
    let points: Vec<Vec<f64>> = (0..grid.len())
        .map(|i| {
            let xi = grid.point_at(i);
            let mut p = xi.clone();
            p.push(surface.height(&xi));
            p
        })
        .collect();
    let values = transform_at(field, &points, Direction::Forward)?;
    Density::with_parts(
        surface,
        grid.clone(),
        values,
        quadrature.weights().to_vec(),
    )
}

/// Relative defect of the adjointness pairing
/// `⟨g, E f⟩ = ⟨R g, f⟩` on matched quadratures.
pub fn adjoint_defect(g: &SampledField, f: &Density) -> Result<f64> {
    let grid = g.grid();
    let points: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.point_at(i)).collect();
    let ef = extend(f, &EvalSet::new(points)?)?;
    let w = grid.cell_volume();
    let lhs: Complex64 = g
        .values()
        .iter()
        .zip(&ef)
        .map(|(gv, ev)| gv * ev.conj())
        .sum::<Complex64>()
        * w;
    let rg = restrict_onto(g, f)?;
    let rhs: Complex64 = rg
        .values()
        .iter()
        .zip(f.values())
        .zip(f.weights())
        .map(|((rv, fv), &wj)| rv * fv.conj() * wj)
        .sum();
    Ok((lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1e-30))
}

/// Parabolic rescaling defect.
///
/// For the paraboloid and the affine map `L(ξ) = (ξ - ξ0)/D`, compares
/// `|E_Ω f(x̄, x_n)|` with `D^{n-1} |E_{L(Ω)} f_L(D(x̄ + 2 x_n ξ0), D² x_n)|`
/// where `f_L = f ∘ L^{-1}` is realized by carrying the same samples to
/// the mapped nodes, making the identity exact on the discrete sums.
/// Returns the max relative modulus defect over the evaluation points.
pub fn rescale_defect(
    f: &Density,
    omega: &[(f64, f64)],
    xi0: &[f64],
    d_scale: f64,
    points: &EvalSet,
) -> Result<f64> {
    let surface = f.surface();
    if !matches!(surface.kind(), SurfaceKind::Paraboloid) {
        return Err(Error::Unresolvable {
            reason: "parabolic rescaling applies to the paraboloid only".into(),
        });
    }
    let d = surface.domain_dim();
    if omega.len() != d || xi0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: omega.len().max(xi0.len()),
        });
    }
    if !(d_scale > 0.0) {
        return Err(Error::Unresolvable {
            reason: format!("rescaling factor must be positive, got {d_scale}"),
        });
    }
    for (k, &(lo, hi)) in omega.iter().enumerate() {
        let (ulo, uhi) = surface.domain()[k];
        if !(lo < hi) || lo < ulo - 1e-12 || hi > uhi + 1e-12 {
            return Err(Error::Unresolvable {
                reason: format!("sub-box axis {k} [{lo}, {hi}] not inside the domain"),
            });
        }
        // mapped box must stay inside the unit-scale domain
        let mlo = (lo - xi0[k]) / d_scale;
        let mhi = (hi - xi0[k]) / d_scale;
        if mlo < -1.0 - 1e-12 || mhi > 1.0 + 1e-12 {
            return Err(Error::Unresolvable {
                reason: format!("mapped sub-box axis {k} [{mlo}, {mhi}] leaves [-1, 1]"),
            });
        }
    }
    // nodes of f inside omega
    let grid = f.grid();
    let mut sel_nodes: Vec<Vec<f64>> = Vec::new();
    let mut sel_wv: Vec<Complex64> = Vec::new();
    for i in 0..grid.len() {
        let xi = grid.point_at(i);
        if xi
            .iter()
            .zip(omega)
            .all(|(&x, &(lo, hi))| x >= lo && x <= hi)
        {
            sel_wv.push(f.values()[i] * f.weights()[i]);
            sel_nodes.push(xi);
        }
    }
    if sel_nodes.is_empty() {
        return Err(Error::Unresolvable {
            reason: "no quadrature nodes inside the sub-box".into(),
        });
    }
    for p in points.points() {
        if p.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                got: p.len(),
            });
        }
        phase_resolved(linalg::norm(p), grid)?;
    }
    let sum_at = |targets: &[(Vec<f64>, f64)], nodes: &[Vec<f64>]| -> Vec<Complex64> {
        targets
            .iter()
            .map(|(xbar, xn)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (node, wv) in nodes.iter().zip(&sel_wv) {
                    let r2: f64 = node.iter().map(|c| c * c).sum();
                    let mut phase = xn * r2;
                    for k in 0..d {
                        phase += xbar[k] * node[k];
                    }
                    acc += wv * Complex::from_polar(1.0, 2.0 * PI * phase);
                }
                acc
            })
            .collect()
    };
    let direct_targets: Vec<(Vec<f64>, f64)> = points
        .points()
        .iter()
        .map(|p| (p[..d].to_vec(), p[d]))
        .collect();
    let lhs = sum_at(&direct_targets, &sel_nodes);

    let mapped_nodes: Vec<Vec<f64>> = sel_nodes
        .iter()
        .map(|xi| {
            xi.iter()
                .zip(xi0)
                .map(|(&x, &c)| (x - c) / d_scale)
                .collect()
        })
        .collect();
    // change of variables divides each weight by D^{n-1}; the prefactor
    // D^{n-1} cancels it, so reuse the same weighted values
    let mapped_targets: Vec<(Vec<f64>, f64)> = points
        .points()
        .iter()
        .map(|p| {
            let xn = p[d];
            let xbar: Vec<f64> = (0..d)
                .map(|k| d_scale * (p[k] + 2.0 * xn * xi0[k]))
                .collect();
            (xbar, d_scale * d_scale * xn)
        })
        .collect();
    let rhs = sum_at(&mapped_targets, &mapped_nodes);

    let mut worst = 0.0f64;
    for (a, b) in lhs.iter().zip(&rhs) {
        let defect = (a.norm() - b.norm()).abs() / (a.norm() + b.norm() + 1e-30);
        worst = worst.max(defect);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    fn parabola_density(samples: usize) -> Density {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        Density::uniform(&s, samples).unwrap()
    }

    #[test]
    fn constant_density_at_origin_gives_domain_measure() {
        let d = parabola_density(128);
        let out = extend(&d, &EvalSet::new(vec![vec![0.0, 0.0]]).unwrap()).unwrap();
        assert!((out[0].re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn empty_point_set_rejected() {
        assert!(matches!(EvalSet::new(vec![]), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn modulation_shifts_evaluation() {
        // extending f(ξ) e^{-2πi a ξ} at (x', x_n) equals extending f at (x'-a, x_n)
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let a = 0.75;
        let f = Density::from_fn(&s, 128, |xi| {
            Complex64::new(0.3 + xi[0], -0.2 * xi[0] * xi[0])
        })
        .unwrap();
        let fm = Density::from_fn(&s, 128, |xi| {
            Complex64::new(0.3 + xi[0], -0.2 * xi[0] * xi[0])
                * Complex::from_polar(1.0, -2.0 * PI * a * xi[0])
        })
        .unwrap();
        let x = vec![1.3, 2.0];
        let shifted = vec![x[0] - a, x[1]];
        let lhs = extend(&fm, &EvalSet::new(vec![x]).unwrap()).unwrap()[0];
        let rhs = extend(&f, &EvalSet::new(vec![shifted]).unwrap()).unwrap()[0];
        assert!((lhs - rhs).norm() < 1e-10 * (lhs.norm() + 1.0));
    }

    #[test]
    fn extend_matches_refined_quadrature() {
        // doubled resolution as the independent oracle
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let smooth = |xi: &[f64]| {
            Complex64::new(
                (1.5 * xi[0]).cos(),
                0.4 * (2.0 * xi[0]).sin(),
            )
        };
        // midpoint-rule error scales like h^2 (2π|x|(1+sup|∇ψ|))^2, so the
        // 1e-6 target needs tens of thousands of 1-D nodes
        let coarse = Density::from_fn(&s, 32_768, smooth).unwrap();
        let fine = Density::from_fn(&s, 65_536, smooth).unwrap();
        let pts = EvalSet::new(vec![vec![0.7, -1.1], vec![2.0, 0.4], vec![-1.9, 1.2]]).unwrap();
        let a = extend(&coarse, &pts).unwrap();
        let b = extend(&fine, &pts).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-6, "coarse {x} fine {y}");
        }
    }

    #[test]
    fn extend_is_linear() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let f = Density::from_fn(&s, 64, |xi| Complex64::new(xi[0], 0.5)).unwrap();
        let g = Density::from_fn(&s, 64, |xi| Complex64::new(0.2, xi[0] * xi[0])).unwrap();
        let alpha = Complex64::new(1.3, -0.4);
        let beta = Complex64::new(-0.6, 0.9);
        let combo = f.linear_combination(alpha, &g, beta).unwrap();
        let pts = EvalSet::new(vec![vec![1.0, 0.3], vec![-0.4, 2.2]]).unwrap();
        let ef = extend(&f, &pts).unwrap();
        let eg = extend(&g, &pts).unwrap();
        let ec = extend(&combo, &pts).unwrap();
        for i in 0..pts.len() {
            let want = alpha * ef[i] + beta * eg[i];
            assert!((ec[i] - want).norm() <= 1e-12 * (want.norm() + 1.0));
        }
    }

    #[test]
    fn extend_bounded_by_mass() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let f = Density::from_fn(&s, 64, |xi| Complex64::new(xi[0].cos(), xi[0])).unwrap();
        let mass: f64 = f
            .values()
            .iter()
            .zip(f.weights())
            .map(|(v, w)| v.norm() * w)
            .sum();
        let pts = EvalSet::new(vec![vec![0.0, 0.0], vec![2.0, -1.0], vec![-3.0, 3.0]]).unwrap();
        for v in extend(&f, &pts).unwrap() {
            assert!(v.norm() <= mass * (1.0 + 1e-12));
        }
    }

    #[test]
    fn restrict_zero_field_is_zero() {
        let g = Grid::centered(2, 6.0, 64).unwrap();
        let field = SampledField::zeros(g);
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let r = restrict(&field, &s, 32).unwrap();
        assert!(r.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn restrict_gaussian_matches_closed_form() {
        // transform of exp(-pi |x|^2) is exp(-pi |xi|^2); on the parabola the
        // restricted values are exp(-pi (xi^2 + xi^4))
        let g = Grid::centered(2, 6.0, 128).unwrap();
        let field = SampledField::from_real_fn(g, |x| {
            (-PI * (x[0] * x[0] + x[1] * x[1])).exp()
        });
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let r = restrict(&field, &s, 32).unwrap();
        for (i, v) in r.values().iter().enumerate() {
            let xi = r.grid().point_at(i)[0];
            let want = (-PI * (xi * xi + xi * xi * xi * xi)).exp();
            assert!(
                (v.re - want).abs() < 1e-6 && v.im.abs() < 1e-6,
                "xi {xi}: got {v}, want {want}"
            );
        }
    }

    #[test]
    fn restrict_is_linear() {
        let g = Grid::centered(2, 6.0, 32).unwrap();
        let f1 = SampledField::from_real_fn(g.clone(), |x| {
            (-PI * (x[0] * x[0] + x[1] * x[1])).exp()
        });
        let f2 = SampledField::from_fn(g.clone(), |x| {
            Complex64::new(0.0, (-0.5 * PI * (x[0] * x[0] + x[1] * x[1])).exp())
        });
        let sum = f1.add(&f2).unwrap();
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let r1 = restrict(&f1, &s, 16).unwrap();
        let r2 = restrict(&f2, &s, 16).unwrap();
        let rs = restrict(&sum, &s, 16).unwrap();
        for i in 0..rs.values().len() {
            let want = r1.values()[i] + r2.values()[i];
            assert!((rs.values()[i] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn restrict_guards_boundary() {
        let g = Grid::centered(2, 1.0, 32).unwrap();
        let field = SampledField::from_real_fn(g, |_| 1.0);
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        assert!(matches!(
            restrict(&field, &s, 16),
            Err(Error::BoundaryDecay { .. })
        ));
    }

    #[test]
    fn adjoint_defect_vanishes_on_matched_quadratures() {
        let g = Grid::centered(2, 5.0, 32).unwrap();
        let mut rng = crate::rng::stream_rng(42, &[0]);
        let values: Vec<Complex64> = (0..g.len())
            .map(|i| {
                let x = g.point_at(i);
                let r2 = x[0] * x[0] + x[1] * x[1];
                crate::rng::complex_gaussian(&mut rng) * (-0.9 * r2).exp()
            })
            .collect();
        let field = SampledField::new(g, values).unwrap();
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let f = Density::from_fn(&s, 64, |xi| Complex64::new(1.0 - xi[0] * xi[0], xi[0])).unwrap();
        let defect = adjoint_defect(&field, &f).unwrap();
        assert!(defect <= 1e-10, "defect {defect}");
    }

    #[test]
    fn adjoint_defect_zero_density() {
        let g = Grid::centered(2, 5.0, 16).unwrap();
        let field = SampledField::from_real_fn(g, |x| {
            (-(x[0] * x[0] + x[1] * x[1])).exp()
        });
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let f = Density::from_fn(&s, 64, |_| Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(adjoint_defect(&field, &f).unwrap(), 0.0);
    }

    #[test]
    fn rescale_identity_map_has_zero_defect() {
        let d = parabola_density(128);
        let pts = EvalSet::new(vec![vec![0.5, 1.0], vec![-2.0, 3.0]]).unwrap();
        let defect = rescale_defect(&d, &[(-1.0, 1.0)], &[0.0], 1.0, &pts).unwrap();
        assert!(defect <= 1e-14, "defect {defect}");
    }

    #[test]
    fn rescale_quarter_scale_exact() {
        let s = Hypersurface::parabola(-1.0, 1.0).unwrap();
        let f = Density::from_fn(&s, 256, |xi| {
            Complex64::new((3.0 * xi[0]).sin() + 0.2, xi[0])
        })
        .unwrap();
        let pts = EvalSet::new(vec![
            vec![0.1, 0.7],
            vec![-1.5, 2.0],
            vec![2.0, -0.3],
        ])
        .unwrap();
        let defect = rescale_defect(&f, &[(0.25, 0.75)], &[0.5], 0.25, &pts).unwrap();
        assert!(defect <= 1e-12, "defect {defect}");
    }
}
