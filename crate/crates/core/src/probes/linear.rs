//! Probes for the linear theory: transform norm inequalities, random sign
//! sums, cap indicators, and the dyadic pieces of the surface-measure
//! transform.

use std::f64::consts::PI;

use num_complex::Complex;

use super::{base_config, bessel_j0, Check, CheckKind, ProbeConfig, ProbeReport, ReportBuilder, ScaleRow};
use crate::error::{Error, Result};
use crate::rng;
use crate::spectral::{fit_slope, lp_norm, plateau, transform, Direction, Grid, SampledField};
use crate::Complex64;

fn dual_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

// ---------------------------------------------------------------------
// transform norm ratios

pub(super) fn hausdorff_young_defaults(seed: u64) -> ProbeConfig {
    let mut c = base_config("hausdorff-young", seed, vec![32.0, 64.0], 100);
    c.params.insert("p".into(), 1.5);
    c
}

/// Max over random fields of `||f^||_{p'} / ||f||_p`; bounded by 1 for
/// `1 <= p <= 2` because the discrete transform interpolates exactly
/// between mass contraction at `p = 1` and unitarity at `p = 2`.
pub(super) fn hausdorff_young_probe(config: &ProbeConfig) -> Result<ProbeReport> {
    let p = config.param("p", 1.5);
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::BadConfig {
            reason: format!("exponent p must lie in [1, 2], got {p}"),
        });
    }
    let q = dual_exponent(p);
    let mut builder = ReportBuilder::new(config);
    for (si, &scale) in config.scales.iter().enumerate() {
        let n = scale as usize;
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::BadSampleCount { axis: 0, samples: n });
        }
        let grid = Grid::centered(1, 4.0, n)?;
        let values = crate::exec::par_map_indexed(config.trials, |t| {
            let mut r = rng::stream_rng(config.seed, &[si as u64, t as u64]);
            let vals: Vec<Complex64> = (0..grid.len())
                .map(|_| rng::complex_gaussian(&mut r))
                .collect();
            let f = SampledField::new(grid.clone(), vals).expect("finite gaussians");
            let spec = transform(&f, Direction::Forward).expect("compatible reciprocal grid");
            let num = lp_norm(&spec, q).expect("valid exponent");
            let den = lp_norm(&f, p).expect("valid exponent");
            if den == 0.0 {
                f64::NAN
            } else {
                num / den
            }
        });
        let clean: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        let skipped = values.len() - clean.len();
        let measured = clean.iter().copied().fold(0.0f64, f64::max);
        builder.reject_trials(skipped);
        builder.row(ScaleRow {
            scale,
            measured,
            trial_values: clean,
            skipped_trials: skipped,
            extra: Default::default(),
        });
    }
    let max_ratio = builder_max(&builder);
    builder.note("transform norm ratio bounded by one for exponents between mass and energy");
    builder.check(Check::new(
        "norm-ratio-bound",
        max_ratio,
        1.0,
        config.defect_tol,
        CheckKind::AtMost,
    ));
    Ok(builder.build())
}

fn builder_max(b: &ReportBuilder) -> f64 {
    b.peek_rows()
        .iter()
        .map(|r| r.measured)
        .fold(0.0f64, f64::max)
}

// ---------------------------------------------------------------------
// random sign sums of spread bumps

pub(super) fn khintchine_defaults(seed: u64) -> ProbeConfig {
    let mut c = base_config("khintchine", seed, vec![4.0, 8.0, 16.0, 32.0, 64.0], 200);
    c.slope_tol = 0.05;
    c.params.insert("p_prime".into(), 4.0);
    c.params.insert("spacing".into(), 2.5);
    c
}

/// Sign-randomized sums of unit bumps at spread centers. The mean dual
/// norm of the transform grows like `m^{1/2}` while the `L^p` norm of the
/// sum itself grows exactly like `m^{1/p}`.
pub(super) fn khintchine_probe(config: &ProbeConfig) -> Result<ProbeReport> {
    let p_prime = config.param("p_prime", 4.0);
    if !(p_prime > 2.0) {
        return Err(Error::BadConfig {
            reason: format!("dual exponent must exceed 2, got {p_prime}"),
        });
    }
    let p = dual_exponent(p_prime);
    let spacing = config.param("spacing", 2.5);
    if spacing < 2.0 {
        return Err(Error::MarginViolated {
            required: 2.0,
            got: spacing,
        });
    }
    let m_max = config.scales.iter().cloned().fold(0.0f64, f64::max) as usize;
    // grid aligned so every center is a whole number of cells from the
    // first: the bumps then share one sample pattern and the L^p norm of
    // the sum is exactly additive
    let n: usize = 8192;
    let width = spacing * (m_max as f64 + 1.0);
    let grid = Grid::new(&[(0.0, width)], &[n])?;
    let h = grid.axis(0).spacing;
    let cells_per_spacing = (spacing / h).round();
    if (cells_per_spacing * h - spacing).abs() > 1e-12 {
        return Err(Error::BadConfig {
            reason: "bump spacing must be a whole number of grid cells".into(),
        });
    }
    let mut builder = ReportBuilder::new(config);
    let mut density_pts: Vec<(f64, f64)> = Vec::new();
    for (si, &scale) in config.scales.iter().enumerate() {
        let m = scale as usize;
        let centers: Vec<f64> = (0..m).map(|j| 1.5 + spacing * j as f64).collect();
        // deterministic L^p norm of the unsigned sum (disjoint supports)
        let unsigned = SampledField::from_real_fn(grid.clone(), |x| {
            centers
                .iter()
                .map(|&c| crate::spectral::bump_profile(x[0] - c))
                .sum()
        });
        let f_norm = lp_norm(&unsigned, p)?;
        let means = crate::exec::par_map_indexed(config.trials, |t| {
            let mut r = rng::stream_rng(config.seed, &[si as u64, t as u64]);
            let signs: Vec<f64> = (0..m)
                .map(|_| {
                    use rand::Rng;
                    if r.gen_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                })
                .collect();
            let f = SampledField::from_real_fn(grid.clone(), |x| {
                centers
                    .iter()
                    .zip(&signs)
                    .map(|(&c, &s)| s * crate::spectral::bump_profile(x[0] - c))
                    .sum()
            });
            let spec = transform(&f, Direction::Forward).expect("reciprocal grid");
            lp_norm(&spec, p_prime).expect("valid exponent")
        });
        let mean = means.iter().sum::<f64>() / means.len() as f64;
        let mut extra = std::collections::BTreeMap::new();
        extra.insert("density-norm".into(), f_norm);
        density_pts.push((scale, f_norm));
        builder.row(ScaleRow {
            scale,
            measured: mean,
            trial_values: means,
            skipped_trials: 0,
            extra,
        });
    }
    builder.target(0.5, "mean dual transform norm of random sign sums grows like the square root of the bump count");
    builder.fit_headline(0.5, config.slope_tol, "transform-norm-growth");
    if density_pts.len() >= 2 {
        let fit = fit_slope(&density_pts)?;
        builder.check(Check::new(
            "density-norm-growth",
            fit.exponent,
            1.0 / p,
            0.02,
            CheckKind::Within,
        ));
    }
    Ok(builder.build())
}

// ---------------------------------------------------------------------
// cap indicators under the extension operator

pub(super) fn knapp_defaults(seed: u64) -> ProbeConfig {
    let mut c = base_config(
        "knapp",
        seed,
        vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
        1,
    );
    c.slope_tol = 0.05;
    c.params.insert("p_prime".into(), 4.0);
    c.params.insert("q_prime".into(), 4.0);
    c
}

/// Extension of the indicator of a width-`δ` cap, measured in
/// `L^{p'}` on the ball of radius `δ^{-2}` against the `L^{q'}` norm of
/// the indicator. The analytic tube computation predicts the ratio to
/// scale like `δ^{1 - 3/p' - 1/q'}`; the admissible exponent line is the
/// zero of that power.
pub(super) fn knapp_probe(config: &ProbeConfig) -> Result<ProbeReport> {
    let p_prime = config.param("p_prime", 4.0);
    let q_prime = config.param("q_prime", 4.0);
    let max_nodes = config.param("max_nodes", 2_000_000.0) as usize;
    if !(p_prime >= 1.0) || !(q_prime >= 1.0) {
        return Err(Error::BadConfig {
            reason: "exponents must be at least 1".into(),
        });
    }
    let mut builder = ReportBuilder::new(config);
    for &delta in &config.scales {
        if !(delta > 0.0) || delta > 0.5 {
            return Err(Error::BadConfig {
                reason: format!("cap width must lie in (0, 1/2], got {delta}"),
            });
        }
        let radius = 1.0 / (delta * delta);
        // quadrature over the cap resolving the largest phase in the ball
        let x_norm_max = radius * std::f64::consts::SQRT_2;
        let h_u = 1.0 / (8.0 * std::f64::consts::SQRT_2 * x_norm_max);
        let nodes = (delta / h_u).ceil() as usize;
        if nodes > max_nodes {
            return Err(Error::PhaseUnresolved {
                axis: 0,
                product: nodes as f64,
                limit: max_nodes as f64,
            });
        }
        let h_u = delta / nodes as f64;
        let xi: Vec<f64> = (0..nodes)
            .map(|j| -0.5 * delta + (j as f64 + 0.5) * h_u)
            .collect();
        let xi2: Vec<f64> = xi.iter().map(|v| v * v).collect();
        // evaluation grid over [-R, R]^2 at a quarter of the tube width
        let n_axis = ((8.0 / delta).ceil() as usize).next_power_of_two();
        let h = 2.0 * radius / n_axis as f64;
        let row_sums = crate::exec::par_map_indexed(n_axis, |iy| {
            let y = -radius + (iy as f64 + 0.5) * h;
            // second phase factor fixed along the row
            let chirp: Vec<Complex64> = xi2
                .iter()
                .map(|&s| Complex::from_polar(h_u, 2.0 * PI * y * s))
                .collect();
            let mut acc = 0.0;
            for ix in 0..n_axis {
                let x = -radius + (ix as f64 + 0.5) * h;
                if x * x + y * y > radius * radius {
                    continue;
                }
                let mut e = Complex64::new(0.0, 0.0);
                for (xi_j, c) in xi.iter().zip(&chirp) {
                    e += c * Complex::from_polar(1.0, 2.0 * PI * x * xi_j);
                }
                acc += e.norm().powf(p_prime);
            }
            acc
        });
        let lp: f64 = (row_sums.iter().sum::<f64>() * h * h).powf(1.0 / p_prime);
        let denom = delta.powf(1.0 / q_prime);
        builder.row(ScaleRow {
            scale: delta,
            measured: lp / denom,
            trial_values: vec![lp / denom],
            skipped_trials: 0,
            extra: Default::default(),
        });
    }
    let target = 1.0 - 3.0 / p_prime - 1.0 / q_prime;
    builder.target(
        target,
        "tube computation for cap indicators: ratio scales like delta^(1 - 3/p' - 1/q')",
    );
    builder.fit_headline(target, config.slope_tol, "cap-ratio-exponent");
    Ok(builder.build())
}

// ---------------------------------------------------------------------
// dyadic pieces of the surface-measure transform

pub(super) fn stein_tomas_defaults(seed: u64) -> ProbeConfig {
    let mut c = base_config(
        "stein-tomas-pieces",
        seed,
        vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0],
        1,
    );
    c.params.insert("n".into(), 2.0);
    c
}

/// Radial mollified indicator: 1 inside radius 1/2, 0 outside radius 1.
fn shell_cut(r: f64) -> f64 {
    plateau(r, 0.5, 1.0)
}

/// Smooth radial cutoff on the surface parameter domain, supported in
/// `|u| <= 0.9`.
fn domain_cut(r: f64) -> f64 {
    plateau(r, 0.45, 0.9)
}

/// Transform of the cut surface measure for the 1-D parabola.
fn measure_ft_curve(x1: f64, x2: f64) -> f64 {
    let scale = 1.0 + x1.abs() + 1.8 * x2.abs();
    let nodes = ((1.8 * 16.0 * scale) as usize).max(64);
    let h = 1.8 / nodes as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let u = -0.9 + (j as f64 + 0.5) * h;
        let w = domain_cut(u.abs());
        if w > 0.0 {
            acc += Complex::from_polar(w, 2.0 * PI * (x1 * u + x2 * u * u));
        }
    }
    (acc * h).norm()
}

/// Transform of the cut surface measure for the 2-D circular paraboloid,
/// reduced to one radial integral with a Bessel factor.
fn measure_ft_paraboloid(r_perp: f64, x3: f64) -> f64 {
    let scale = 1.0 + r_perp + 1.8 * x3.abs();
    let nodes = ((0.9 * 16.0 * scale) as usize).max(64);
    let h = 0.9 / nodes as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let r = (j as f64 + 0.5) * h;
        let w = domain_cut(r);
        if w > 0.0 {
            let radial = w * r * bessel_j0(2.0 * PI * r_perp * r);
            acc += Complex::from_polar(1.0, 2.0 * PI * x3 * r * r) * radial;
        }
    }
    (acc * h * 2.0 * PI).norm()
}

/// Radial profile table of the transform of the shell cutoff in
/// dimension `n`, on `[0, rho_max]`.
struct RadialTable {
    step: f64,
    values: Vec<f64>,
}

impl RadialTable {
    fn build(n: usize, rho_max: f64) -> RadialTable {
        let step = 1.0 / 128.0;
        let count = (rho_max / step).ceil() as usize + 2;
        let quad = 2048;
        let hq = 1.0 / quad as f64;
        let values = crate::exec::par_map_indexed(count, |i| {
            let rho = i as f64 * step;
            let mut acc = 0.0;
            if n == 2 {
                for j in 0..quad {
                    let r = (j as f64 + 0.5) * hq;
                    acc += r * shell_cut(r) * bessel_j0(2.0 * PI * rho * r);
                }
                2.0 * PI * acc * hq
            } else {
                if rho < 1e-6 {
                    for j in 0..quad {
                        let r = (j as f64 + 0.5) * hq;
                        acc += r * r * shell_cut(r);
                    }
                    4.0 * PI * acc * hq
                } else {
                    for j in 0..quad {
                        let r = (j as f64 + 0.5) * hq;
                        acc += r * shell_cut(r) * (2.0 * PI * rho * r).sin();
                    }
                    2.0 * acc * hq / rho
                }
            }
        });
        RadialTable { step, values }
    }

    fn eval(&self, rho: f64) -> f64 {
        let t = rho.abs() / self.step;
        let i = t.floor() as usize;
        if i + 1 >= self.values.len() {
            return 0.0;
        }
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

pub(super) fn stein_tomas_probe(config: &ProbeConfig) -> Result<ProbeReport> {
    let n = config.param("n", 2.0) as usize;
    if n != 2 && n != 3 {
        return Err(Error::BadConfig {
            reason: format!("ambient dimension must be 2 or 3, got {n}"),
        });
    }
    let mut builder = ReportBuilder::new(config);

    // telescoping of the shell cutoffs
    let j_top = config
        .scales
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
        .log2()
        .round() as i32;
    let mut tel_defect: f64 = 0.0;
    for t in 0..1000u64 {
        let r = 2.0 * (j_top as f64).exp2() * rng::counter_uniform(config.seed, &[77, t]);
        let mut acc = shell_cut(r);
        for j in 1..=j_top {
            let s = (j as f64).exp2();
            acc += shell_cut(r / s) - shell_cut(r / (s / 2.0));
        }
        tel_defect = tel_defect.max((acc - shell_cut(r / (j_top as f64).exp2())).abs());
    }
    builder.check(Check::new(
        "telescoping-identity",
        tel_defect,
        0.0,
        1e-12,
        CheckKind::AtMost,
    ));

    // sup norms of the annular pieces K_j = phi_j * measure transform
    let mut sup_pts: Vec<(f64, f64)> = Vec::new();
    let mut hat_pts: Vec<(f64, f64)> = Vec::new();
    let table = RadialTable::build(n, 60.0);
    let shell_weight = |r: f64, s: f64| shell_cut(r / s) - shell_cut(r / (s / 2.0));
    for &scale in &config.scales {
        let s = scale; // 2^j
        // sup over the annulus, sampled in radius and direction
        let radii = 14usize;
        let dirs = 16usize;
        let sup = crate::exec::par_map_indexed(radii, |ri| {
            let rho = 0.25 * s * ((4.0f64).powf(ri as f64 / (radii - 1) as f64));
            let w = shell_weight(rho, s);
            if w.abs() < 1e-14 {
                return 0.0;
            }
            let mut best: f64 = 0.0;
            for di in 0..dirs {
                let theta = PI * (di as f64 + 0.5) / dirs as f64;
                let v = if n == 2 {
                    measure_ft_curve(rho * theta.sin(), rho * theta.cos())
                } else {
                    measure_ft_paraboloid(rho * theta.sin(), rho * theta.cos())
                };
                best = best.max(w.abs() * v);
            }
            best
        })
        .into_iter()
        .fold(0.0f64, f64::max);
        sup_pts.push((s, sup));

        // sup of the transform of K_j via the layer integral of the
        // dilated shell profile across the reflected surface
        let hat = khat_sup(n, s, &table);
        hat_pts.push((s, hat));

        let mut extra = std::collections::BTreeMap::new();
        extra.insert("piece-transform-sup".into(), hat);
        builder.row(ScaleRow {
            scale,
            measured: sup,
            trial_values: vec![sup],
            skipped_trials: 0,
            extra,
        });
    }
    let target = -((n - 1) as f64) / 2.0;
    builder.target(
        target,
        "stationary-phase decay of the cut surface measure on dyadic annuli",
    );
    let sup_fit = fit_slope(&sup_pts)?;
    builder.check(Check::new(
        "sup-decay-exponent",
        sup_fit.exponent,
        target + 0.1,
        1e-9,
        CheckKind::AtMost,
    ));
    builder.fit(sup_fit);
    let hat_fit = fit_slope(&hat_pts)?;
    builder.check(Check::new(
        "piece-transform-growth",
        hat_fit.exponent,
        1.1,
        1e-9,
        CheckKind::AtMost,
    ));
    Ok(builder.build())
}

/// Max of `|K_j^|` sampled near the reflected surface shell. The value at
/// a point is the integral of the dilated annular profile against the cut
/// measure, evaluated with the radial profile table.
fn khat_sup(n: usize, s: f64, table: &RadialTable) -> f64 {
    let d = n - 1;
    let bases: &[&[f64]] = if n == 2 {
        &[&[0.0], &[0.25], &[-0.4]]
    } else {
        &[&[0.0, 0.0], &[0.25, -0.2], &[0.0, 0.35]]
    };
    let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let inv_s = 1.0 / s;
    let window = 60.0 * inv_s;
    let h_u = inv_s / 4.0;
    let mut best: f64 = 0.0;
    for base in bases {
        let eta_base: Vec<f64> = {
            let mut e = base.to_vec();
            e.push(base.iter().map(|u| u * u).sum());
            e
        };
        let mut offset_grid: Vec<Vec<f64>> = vec![vec![]];
        for _axis in 0..n {
            let mut next = Vec::new();
            for partial in &offset_grid {
                for &o in &offsets {
                    let mut p = partial.clone();
                    p.push(o * inv_s);
                    next.push(p);
                }
            }
            offset_grid = next;
        }
        let vals = crate::exec::par_map_indexed(offset_grid.len(), |oi| {
            let eta: Vec<f64> = eta_base
                .iter()
                .zip(&offset_grid[oi])
                .map(|(a, b)| a + b)
                .collect();
            // integrate over the parameter window around the projection
            let lo: Vec<f64> = (0..d).map(|k| eta[k] - window).collect();
            let steps = ((2.0 * window) / h_u).ceil() as usize;
            let total = steps.pow(d as u32);
            let mut acc = 0.0;
            for flat in 0..total {
                let mut rest = flat;
                let mut u = [0.0f64; 2];
                for k in (0..d).rev() {
                    u[k] = lo[k] + ((rest % steps) as f64 + 0.5) * h_u;
                    rest /= steps;
                }
                let u = &u[..d];
                let r_u: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
                let w = domain_cut(r_u);
                if w > 0.0 {
                    let mut dist2 = 0.0;
                    for k in 0..d {
                        let dd = eta[k] - u[k];
                        dist2 += dd * dd;
                    }
                    let height: f64 = u.iter().map(|v| v * v).sum();
                    let dd = eta[d] - height;
                    dist2 += dd * dd;
                    let rho = dist2.sqrt();
                    let piece = s.powi(n as i32) * table.eval(s * rho)
                        - (s / 2.0).powi(n as i32) * table.eval(s / 2.0 * rho);
                    acc += w * piece;
                }
            }
            acc * h_u.powi(d as i32)
        });
        for v in vals {
            best = best.max(v.abs());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::run_probe;

    #[test]
    fn hausdorff_young_plancherel_case() {
        let mut c = hausdorff_young_defaults(3);
        c.params.insert("p".into(), 2.0);
        c.trials = 20;
        c.scales = vec![64.0];
        let r = run_probe(&c).unwrap();
        assert!(r.verdict, "checks: {:?}", r.checks);
        // unitary case: every ratio is 1 to rounding
        for row in &r.rows {
            for v in &row.trial_values {
                assert!((v - 1.0).abs() <= 1e-8, "ratio {v}");
            }
        }
    }

    #[test]
    fn hausdorff_young_mass_case() {
        let mut c = hausdorff_young_defaults(4);
        c.params.insert("p".into(), 1.0);
        c.trials = 50;
        let r = run_probe(&c).unwrap();
        assert!(r.verdict);
        assert!(r.empirical_constant <= 1.0 + 1e-6);
    }

    #[test]
    fn hausdorff_young_rejects_bad_exponent() {
        let mut c = hausdorff_young_defaults(0);
        c.params.insert("p".into(), 2.5);
        assert!(run_probe(&c).is_err());
    }

    #[test]
    fn khintchine_single_bump_sign_invariant() {
        // m = 1: dual norm of the transform does not depend on the sign
        let c = khintchine_defaults(9);
        let grid = Grid::new(&[(0.0, 10.0)], &[1024]).unwrap();
        let plus = SampledField::from_real_fn(grid.clone(), |x| {
            crate::spectral::bump_profile(x[0] - 1.5)
        });
        let minus = plus.scale(Complex64::new(-1.0, 0.0));
        let np = lp_norm(&transform(&plus, Direction::Forward).unwrap(), 4.0).unwrap();
        let nm = lp_norm(&transform(&minus, Direction::Forward).unwrap(), 4.0).unwrap();
        assert!((np - nm).abs() <= 1e-12 * np);
        let _ = c;
    }

    #[test]
    fn khintchine_rejects_tight_spacing() {
        let mut c = khintchine_defaults(0);
        c.params.insert("spacing".into(), 1.0);
        assert!(matches!(
            run_probe(&c),
            Err(Error::MarginViolated { .. })
        ));
    }

    #[test]
    fn knapp_single_scale_has_no_fit() {
        let mut c = knapp_defaults(5);
        c.scales = vec![1.0 / 8.0];
        let r = run_probe(&c).unwrap();
        assert!(r.fit.is_none());
        assert!(r.empirical_constant > 0.0);
    }

    #[test]
    fn knapp_guards_excessive_resolution() {
        let mut c = knapp_defaults(0);
        c.params.insert("max_nodes".into(), 10.0);
        assert!(matches!(
            run_probe(&c),
            Err(Error::PhaseUnresolved { .. })
        ));
    }

    #[test]
    fn curve_measure_transform_matches_module_quadrature() {
        // independent route: the surface-measure quadrature from the
        // geometry module with the same cutoff density
        let s = crate::surface::Hypersurface::parabola(-0.9, 0.9).unwrap();
        let d = crate::surface::Density::from_fn(&s, 4096, |xi| {
            Complex64::new(domain_cut(xi[0].abs()), 0.0)
        })
        .unwrap();
        for x in [[0.0, 0.0], [1.0, 2.0], [-3.0, 5.0]] {
            let a = crate::surface::measure_ft(&d, &x).unwrap().norm();
            let b = measure_ft_curve(x[0], x[1]);
            assert!((a - b).abs() < 1e-6, "at {x:?}: {a} vs {b}");
        }
    }

    #[test]
    fn paraboloid_radial_reduction_matches_direct_2d() {
        // direct 2-D quadrature oracle at moderate points
        for (rp, x3) in [(0.0, 0.0), (1.5, 2.0), (3.0, -4.0)] {
            let m = 1200usize;
            let h = 1.8 / m as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..m {
                for j in 0..m {
                    let u1 = -0.9 + (i as f64 + 0.5) * h;
                    let u2 = -0.9 + (j as f64 + 0.5) * h;
                    let r = (u1 * u1 + u2 * u2).sqrt();
                    let w = domain_cut(r);
                    if w > 0.0 {
                        let phase = rp * u1 + x3 * (u1 * u1 + u2 * u2);
                        acc += Complex::from_polar(w, 2.0 * PI * phase);
                    }
                }
            }
            let direct = (acc * h * h).norm();
            let radial = measure_ft_paraboloid(rp, x3);
            assert!(
                (direct - radial).abs() < 2e-4,
                "({rp}, {x3}): {direct} vs {radial}"
            );
        }
    }

    #[test]
    fn stein_tomas_small_run_passes() {
        let mut c = stein_tomas_defaults(1);
        c.scales = vec![4.0, 8.0, 16.0, 32.0];
        let r = run_probe(&c).unwrap();
        assert!(r.verdict, "checks {:?}", r.checks);
    }
}
