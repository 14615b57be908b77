//! Fresnel-type integrals for exact extensions of piecewise-constant
//! densities on the parabola.
//!
//! The primitive is `w(u) = ∫_0^u e^{iπ t²} dt`. Completing the square
//! turns every cell integral `∫_a^b e^{2πi(x₁ξ + x₂ξ²)} dξ` into a
//! difference of two `w` values, so the extension of a step-function
//! density is evaluated in closed form at any point, with no oscillatory
//! quadrature and no resolution guard.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::Complex64;

/// Limit value `w(∞) = (1 + i)/2`.
const W_INF: Complex64 = Complex64 { re: 0.5, im: 0.5 };

/// Dense table of `g(u) = (w(u) - w(∞)) e^{-iπu²}` on `[1.25, 8.5]`;
/// `g` is smooth and slowly varying, so cubic interpolation recovers `w`
/// to about 1e-10 while `w` itself oscillates.
struct GTable {
    lo: f64,
    step: f64,
    values: Vec<Complex64>,
}

fn build_gtable() -> GTable {
    let lo = 1.25f64;
    let hi = 8.5f64;
    let step = 1.0f64 / 512.0;
    let count = ((hi - lo) / step).ceil() as usize + 4;
    // incremental high-resolution quadrature of w along the ray
    let quad_step = 1e-5f64;
    let mut values = Vec::with_capacity(count);
    let mut w = Complex64::new(0.0, 0.0);
    let mut t = 0.0f64;
    for i in 0..count {
        let target = lo + i as f64 * step;
        while t < target {
            let h = quad_step.min(target - t);
            let mid = t + 0.5 * h;
            w += Complex::from_polar(h, PI * mid * mid);
            t += h;
        }
        values.push((w - W_INF) * Complex::from_polar(1.0, -PI * target * target));
    }
    GTable { lo, step, values }
}

fn gtable() -> &'static GTable {
    use std::sync::OnceLock;
    static TABLE: OnceLock<GTable> = OnceLock::new();
    TABLE.get_or_init(build_gtable)
}

/// Power series for `w(u)`, accurate below `u ≈ 1.3`.
fn w_series(u: f64) -> Complex64 {
    // w(u) = Σ_k (iπ)^k u^{2k+1} / (k! (2k+1))
    let mut term = Complex64::new(u, 0.0);
    let mut acc = term / 1.0;
    let iu2 = Complex64::new(0.0, PI * u * u);
    let mut acc_total = Complex64::new(u, 0.0);
    let mut k = 1.0;
    loop {
        term *= iu2 / k;
        let add = term / (2.0 * k + 1.0);
        acc_total += add;
        if add.norm() < 1e-17 * acc_total.norm().max(1e-3) {
            break;
        }
        k += 1.0;
        if k > 60.0 {
            break;
        }
    }
    let _ = acc;
    acc_total
}

/// Asymptotic form of `g(u)` for large `u`.
fn g_asymptotic(u: f64) -> Complex64 {
    // g(u) = -e^{-iπu²} ∫_u^∞ e^{iπt²} dt expanded by parts
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let a1 = Complex64::new(1.0, 0.0) / (i2pi * u);
    let a2 = a1 / (i2pi * u * u);
    let a3 = a2 * 3.0 / (i2pi * u * u);
    a1 - a2 + a3
}

/// `w(u) = ∫_0^u e^{iπ t²} dt` for real `u` (odd in `u`).
pub fn fresnel_w(u: f64) -> Complex64 {
    let a = u.abs();
    let val = if a < 1.3 {
        w_series(a)
    } else if a <= 8.4 {
        let t = gtable();
        let x = (a - t.lo) / t.step;
        let i = (x.floor() as usize).min(t.values.len() - 3).max(1);
        let frac = x - i as f64;
        let pm1 = t.values[i - 1];
        let p0 = t.values[i];
        let p1 = t.values[i + 1];
        let p2 = t.values[i + 2];
        let g = (p0 * 2.0
            + (p1 - pm1) * frac
            + (pm1 * 2.0 - p0 * 5.0 + p1 * 4.0 - p2) * frac * frac
            + ((p0 - p1) * 3.0 + p2 - pm1) * frac * frac * frac)
            * 0.5;
        W_INF + g * Complex::from_polar(1.0, PI * a * a)
    } else {
        W_INF + g_asymptotic(a) * Complex::from_polar(1.0, PI * a * a)
    };
    if u < 0.0 {
        -val
    } else {
        val
    }
}

/// `∫_a^b e^{2πi (x1 ξ + x2 ξ²)} dξ` in closed form.
pub fn cell_integral(a: f64, b: f64, x1: f64, x2: f64) -> Complex64 {
    if x2 < 0.0 {
        return cell_integral(a, b, -x1, -x2).conj();
    }
    if x2 < 0.35 {
        // nearly linear phase: resolved midpoint quadrature of the chirp
        let width = b - a;
        let freq = (x1.abs() + 2.0 * x2 * (a.abs().max(b.abs()))) * width;
        let sub = ((freq * 8.0) as usize).clamp(4, 4096);
        let h = width / sub as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..sub {
            let xi = a + (j as f64 + 0.5) * h;
            acc += Complex::from_polar(h, 2.0 * PI * (x1 * xi + x2 * xi * xi));
        }
        return acc;
    }
    let root = (2.0 * x2).sqrt();
    let shift = x1 / (2.0 * x2);
    let ua = (a + shift) * root;
    let ub = (b + shift) * root;
    let phase = Complex::from_polar(1.0 / root, -PI * x1 * x1 / (2.0 * x2));
    phase * (fresnel_w(ub) - fresnel_w(ua))
}

/// Extension of a step density (`values[j]` on `[edges[j], edges[j+1]]`)
/// at the point `(x1, x2)`: the exact continuum oscillatory integral.
pub fn extend_step_density(edges: &[f64], values: &[Complex64], x1: f64, x2: f64) -> Complex64 {
    debug_assert_eq!(edges.len(), values.len() + 1);
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, v) in values.iter().enumerate() {
        acc += v * cell_integral(edges[j], edges[j + 1], x1, x2);
    }
    acc
}
