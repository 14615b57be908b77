//! Grid-weighted `L^p` norms.

use super::SampledField;
use crate::error::{Error, Result};

/// Riemann-sum `L^p` norm with the grid's cell weights.
///
/// `p = f64::INFINITY` returns the max modulus. Exponents in `(0, 1)` are
/// accepted and computed by the same formula; they are quasi-norms
/// (the triangle inequality fails), which is exactly what the
/// low-exponent superposition checks need.
pub fn lp_norm(field: &SampledField, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::BadNormExponent { p });
    }
    if p == f64::INFINITY {
        return Ok(field.max_abs());
    }
    let w = field.grid().cell_volume();
    let sum: f64 = if p == 2.0 {
        field.values().iter().map(|v| v.norm_sqr()).sum()
    } else if p == 1.0 {
        field.values().iter().map(|v| v.norm()).sum()
    } else {
        field.values().iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((sum * w).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use crate::Complex64;

    #[test]
    fn constants_on_unit_interval() {
        let g = Grid::new(&[(0.0, 1.0)], &[16]).unwrap();
        let one = SampledField::from_real_fn(g.clone(), |_| 1.0);
        assert!((lp_norm(&one, 3.0).unwrap() - 1.0).abs() < 1e-12);
        let two = SampledField::from_real_fn(g, |_| 2.0);
        assert!((lp_norm(&two, 2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_is_max_modulus() {
        let g = Grid::new(&[(0.0, 1.0)], &[4]).unwrap();
        let f = SampledField::new(
            g,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(-3.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(lp_norm(&f, f64::INFINITY).unwrap(), 3.0);
    }

    #[test]
    fn rejects_nonpositive_p() {
        let g = Grid::new(&[(0.0, 1.0)], &[4]).unwrap();
        let f = SampledField::zeros(g);
        assert!(lp_norm(&f, 0.0).is_err());
        assert!(lp_norm(&f, -1.5).is_err());
    }

    #[test]
    fn quasi_norm_accepted() {
        let g = Grid::new(&[(0.0, 1.0)], &[8]).unwrap();
        let f = SampledField::from_real_fn(g, |_| 1.0);
        assert!((lp_norm(&f, 0.5).unwrap() - 1.0).abs() < 1e-12);
    }
}
