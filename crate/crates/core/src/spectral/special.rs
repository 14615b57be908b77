//! Smooth compactly supported windows and band-limited majorants.

use super::{Grid, SampledField};
use crate::error::{Error, Result};
use crate::Complex64;

/// Standard smooth bump: `exp(1 - 1/(1-t^2))` for `|t| < 1`, else 0.
/// Equals 1 at `t = 0`, takes values in `[0, 1]`.
pub fn bump_profile(t: f64) -> f64 {
    let t2 = t * t;
    if t2 >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t2)).exp()
    }
}

/// C-infinity step: 0 for `u <= 0`, 1 for `u >= 1`, strictly increasing
/// in between. Built from `exp(-1/u)` partitions.
pub fn smooth_step(u: f64) -> f64 {
    fn e(u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (-1.0 / u).exp()
        }
    }
    let a = e(u);
    let b = e(1.0 - u);
    if a == 0.0 {
        0.0
    } else if b == 0.0 {
        1.0
    } else {
        a / (a + b)
    }
}

/// Mollified indicator in one radial variable: 1 for `r <= inner`,
/// 0 for `r >= outer`, smooth monotone transition in between.
pub fn plateau(r: f64, inner: f64, outer: f64) -> f64 {
    debug_assert!(inner < outer);
    smooth_step((outer - r) / (outer - inner))
}

/// Smooth nonnegative bump field: 1 at `center`, vanishing outside the
/// ball of radius `radius`.
pub fn make_bump(grid: &Grid, center: &[f64], radius: f64) -> Result<SampledField> {
    if !(radius > 0.0) {
        return Err(Error::Unresolvable {
            reason: format!("bump radius must be positive, got {radius}"),
        });
    }
    if center.len() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: center.len(),
        });
    }
    // the ball must meet the grid box
    let mut dist2 = 0.0;
    for (k, &c) in center.iter().enumerate() {
        let a = grid.axis(k);
        let d = if c < a.lo {
            a.lo - c
        } else if c > a.hi {
            c - a.hi
        } else {
            0.0
        };
        dist2 += d * d;
    }
    if dist2 >= radius * radius {
        return Err(Error::Unresolvable {
            reason: "bump support does not intersect the grid box".into(),
        });
    }
    Ok(SampledField::from_real_fn(grid.clone(), |x| {
        let r2: f64 = x
            .iter()
            .zip(center)
            .map(|(xi, ci)| (xi - ci) * (xi - ci))
            .sum();
        bump_profile(r2.sqrt() / radius)
    }))
}

/// Band-limited square majorant.
///
/// Returns a nonnegative field `eta >= 1` on `[-r, r]^2` whose discrete
/// Fourier transform is supported inside `B(0, 1/r)`. Per axis it is the
/// square of a real trigonometric polynomial with harmonics inside
/// `(-1/(4r), 1/(4r))`, so the product of the two squared factors has all
/// harmonics inside the ball of radius `sqrt(2)/(2r) < 1/r` exactly, and
/// the measured spectral leakage is pure rounding.
pub fn make_majorant(r: f64, grid: &Grid) -> Result<SampledField> {
    if !(r > 0.0) {
        return Err(Error::Unresolvable {
            reason: format!("majorant scale must be positive, got {r}"),
        });
    }
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: grid.dim(),
        });
    }
    for k in 0..2 {
        let a = grid.axis(k);
        if a.lo > -2.0 * r || a.hi < 2.0 * r {
            return Err(Error::Unresolvable {
                reason: format!(
                    "grid box [{}, {}] does not contain [-2r, 2r] with r = {r}",
                    a.lo, a.hi
                ),
            });
        }
        if a.hi - a.lo < 16.0 * r {
            return Err(Error::Unresolvable {
                reason: format!(
                    "grid width {} cannot resolve the 1/r frequency support; need >= {}",
                    a.hi - a.lo,
                    16.0 * r
                ),
            });
        }
    }
    let recip = grid.reciprocal();
    let band = 0.25 / r;
    // per-axis window: G(x) = sum over harmonics |nu| < band of
    // w(nu) cos(2 pi x nu), normalized later
    let mut factors: Vec<Vec<f64>> = Vec::with_capacity(2);
    let mut mins: Vec<f64> = Vec::with_capacity(2);
    for k in 0..2 {
        let step = recip.axis(k).spacing;
        let n = grid.axis(k).samples;
        let max_harm = ((band / step).ceil() as i64 - 1).max(0);
        if max_harm < 3 {
            return Err(Error::Unresolvable {
                reason: "fewer than three positive harmonics fit inside the band".into(),
            });
        }
        let weights: Vec<f64> = (0..=max_harm)
            .map(|nu| bump_profile(nu as f64 * step / band))
            .collect();
        let axis_vals: Vec<f64> = (0..n)
            .map(|j| {
                let x = grid.node(k, j);
                let mut acc = weights[0];
                for (nu, &w) in weights.iter().enumerate().skip(1) {
                    acc += 2.0 * w * (2.0 * std::f64::consts::PI * x * nu as f64 * step).cos();
                }
                acc
            })
            .collect();
        let min_core = (0..n)
            .filter(|&j| grid.node(k, j).abs() <= r)
            .map(|j| axis_vals[j])
            .fold(f64::INFINITY, f64::min);
        if !min_core.is_finite() || !(min_core > 0.0) {
            return Err(Error::Unresolvable {
                reason: "window factor not strictly positive on the core square".into(),
            });
        }
        factors.push(axis_vals);
        mins.push(min_core);
    }
    let scale = (1.0 + 1e-9) / (mins[0] * mins[0] * mins[1] * mins[1]);
    let n1 = grid.axis(1).samples;
    let values: Vec<Complex64> = (0..grid.len())
        .map(|flat| {
            let j0 = flat / n1;
            let j1 = flat % n1;
            let g = factors[0][j0] * factors[1][j1];
            Complex64::new(scale * g * g, 0.0)
        })
        .collect();
    SampledField::new(grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_one_at_center_zero_outside() {
        let g = Grid::centered(1, 4.0, 256).unwrap();
        let b = make_bump(&g, &[0.5], 1.0).unwrap();
        for (i, v) in b.values().iter().enumerate() {
            let x = b.grid().point_at(i)[0];
            if (x - 0.5).abs() >= 1.0 {
                assert_eq!(v.re, 0.0);
            }
            assert!((0.0..=1.0).contains(&v.re));
        }
        assert_eq!(bump_profile(0.0), 1.0);
    }

    #[test]
    fn bump_rejects_bad_inputs() {
        let g = Grid::centered(1, 1.0, 16).unwrap();
        assert!(make_bump(&g, &[0.0], 0.0).is_err());
        assert!(make_bump(&g, &[10.0], 0.5).is_err());
    }

    #[test]
    fn smooth_step_endpoints() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(2.0), 1.0);
        assert!(smooth_step(0.5) > 0.0 && smooth_step(0.5) < 1.0);
    }

    #[test]
    fn bump_difference_quotients_bounded() {
        // no jump discontinuities at the support boundary at grid scale
        let g = Grid::centered(1, 2.0, 512).unwrap();
        let b = make_bump(&g, &[0.0], 1.0).unwrap();
        let h = g.axis(0).spacing;
        let vals = b.values();
        let max_quot = (1..vals.len())
            .map(|i| (vals[i].re - vals[i - 1].re).abs() / h)
            .fold(0.0f64, f64::max);
        // sup |d/dt bump| is about 2.5; allow headroom
        assert!(max_quot < 4.0, "difference quotient {max_quot}");
    }

    #[test]
    fn majorant_dominates_square() {
        let r = 1.0;
        let g = Grid::centered(2, 10.0, 128).unwrap();
        let eta = make_majorant(r, &g).unwrap();
        for (i, v) in eta.values().iter().enumerate() {
            let p = eta.grid().point_at(i);
            assert!(v.re >= -1e-12, "negative value {}", v.re);
            if p[0].abs() <= r && p[1].abs() <= r {
                assert!(v.re >= 1.0, "below one at {:?}: {}", p, v.re);
            }
        }
    }

    #[test]
    fn majorant_needs_width() {
        let g = Grid::centered(2, 3.0, 64).unwrap();
        assert!(make_majorant(1.0, &g).is_err());
    }
}
