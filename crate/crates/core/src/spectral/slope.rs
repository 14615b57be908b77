//! Least-squares slope fitting in log-log coordinates.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Result of a log-log line fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    /// Slope of `log y` against `log x`.
    pub exponent: f64,
    /// Intercept in log coordinates.
    pub intercept: f64,
    /// Root-mean-square misfit of `log y` against the fitted line.
    pub residual: f64,
    pub point_count: usize,
}

/// Fit a line through `(log x, log y)`; all coordinates must be positive.
pub fn fit_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints { got: points.len() });
    }
    for &(x, y) in points {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::NonPositivePoint { x, y });
        }
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::NonPositivePoint {
            x: points[0].0,
            y: points[0].1,
        });
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss: f64 = logs
        .iter()
        .map(|p| {
            let r = p.1 - (exponent * p.0 + intercept);
            r * r
        })
        .sum();
    Ok(SlopeFit {
        exponent,
        intercept,
        residual: (ss / n).sqrt(),
        point_count: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_linear() {
        let f = fit_slope(&[(1.0, 1.0), (2.0, 2.0), (4.0, 4.0)]).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert_eq!(f.point_count, 3);
    }

    #[test]
    fn flat_line() {
        let f = fit_slope(&[(1.0, 5.0), (2.0, 5.0), (4.0, 5.0)]).unwrap();
        assert!(f.exponent.abs() < 1e-12);
    }

    #[test]
    fn square_root_powers() {
        let f = fit_slope(&[(1.0, 1.0), (4.0, 2.0), (16.0, 4.0)]).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_single_point_and_nonpositive() {
        assert!(matches!(
            fit_slope(&[(1.0, 1.0)]),
            Err(Error::TooFewPoints { got: 1 })
        ));
        assert!(fit_slope(&[(1.0, 1.0), (-2.0, 3.0)]).is_err());
        assert!(fit_slope(&[(1.0, 0.0), (2.0, 3.0)]).is_err());
    }
}
