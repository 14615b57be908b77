//! Bessel function of the first kind, order zero.
//!
//! Classical rational/asymptotic approximations (absolute error below
//! 1e-7 over the real line), enough for the radial oscillatory
//! quadratures in the decay probes.

/// `J_0(x)`.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 8.0 {
        let y = x * x;
        let p1 = 57568490574.0
            + y * (-13362590354.0
                + y * (651619640.7 + y * (-11214424.18 + y * (77392.33017 + y * (-184.9052456)))));
        let p2 = 57568490411.0
            + y * (1029532985.0 + y * (9494680.718 + y * (59272.64853 + y * (267.8532712 + y))));
        p1 / p2
    } else {
        let z = 8.0 / ax;
        let y = z * z;
        let xx = ax - 0.785398164;
        let p1 = 1.0
            + y * (-0.1098628627e-2 + y * (0.2734510407e-4 + y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
        let p2 = -0.1562499995e-1
            + y * (0.1430488765e-3 + y * (-0.6911147651e-5 + y * (0.7621095161e-6 + y * (-0.934935152e-7))));
        (0.636619772 / ax).sqrt() * (xx.cos() * p1 - z * xx.sin() * p2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_reference_values() {
        // reference values of J0 at a few points
        let cases = [
            (0.0, 1.0),
            (1.0, 0.7651976865579666),
            (2.404825557695773, 0.0), // first zero
            (5.0, -0.17759677131433830),
            (10.0, -0.24593576445134834),
            (50.0, 0.055812327669251746),
        ];
        for (x, want) in cases {
            let got = bessel_j0(x);
            assert!((got - want).abs() < 2e-7, "J0({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn even_function() {
        for x in [0.3, 1.7, 9.2, 40.0] {
            assert_eq!(bessel_j0(x), bessel_j0(-x));
        }
    }

    #[test]
    fn agrees_with_angular_quadrature() {
        // J0(z) = (1/pi) ∫_0^pi cos(z sin t) dt
        for z in [0.5f64, 3.0, 12.0] {
            let n = 20_000;
            let mut acc = 0.0;
            for j in 0..n {
                let t = (j as f64 + 0.5) * std::f64::consts::PI / n as f64;
                acc += (z * t.sin()).cos();
            }
            let want = acc / n as f64;
            assert!((bessel_j0(z) - want).abs() < 1e-6, "z = {z}");
        }
    }
}
