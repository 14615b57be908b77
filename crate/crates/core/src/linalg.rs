//! Dense linear algebra for the small matrices used here (n <= 8).

/// Determinant by Gaussian elimination with partial pivoting.
///
/// `cols` are the matrix columns; all must have length `cols.len()`.
pub fn det_from_columns(cols: &[Vec<f64>]) -> f64 {
    let n = cols.len();
    debug_assert!(cols.iter().all(|c| c.len() == n));
    let mut a: Vec<f64> = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in cols.iter().take(n) {
            a.push(c[r]);
        }
    }
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        for r in k + 1..n {
            if a[r * n + k].abs() > a[piv * n + k].abs() {
                piv = r;
            }
        }
        if a[piv * n + k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        let d = a[k * n + k];
        det *= d;
        for r in k + 1..n {
            let factor = a[r * n + k] / d;
            for c in k..n {
                a[r * n + c] -= factor * a[k * n + c];
            }
        }
    }
    det
}

/// Euclidean norm.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Apply the transpose of a column matrix to `x`: `out[i] = cols[i] . x`.
pub fn apply_transpose(cols: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    cols.iter().map(|c| dot(c, x)).collect()
}

/// Apply a column matrix to coefficients: `out = sum_i coeff[i] cols[i]`.
pub fn apply_columns(cols: &[Vec<f64>], coeff: &[f64]) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (c, &w) in cols.iter().zip(coeff) {
        for (o, &ci) in out.iter_mut().zip(c) {
            *o += w * ci;
        }
    }
    out
}

/// Max deviation of the columns' Gram matrix from the identity.
pub fn gram_defect(cols: &[Vec<f64>]) -> f64 {
    let n = cols.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let g = dot(&cols[i], &cols[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_identity() {
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert_eq!(det_from_columns(&cols), 1.0);
    }

    #[test]
    fn det_swap_changes_sign() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        assert_eq!(det_from_columns(&a), -1.0);
    }

    #[test]
    fn det_singular() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert_eq!(det_from_columns(&a), 0.0);
    }

    #[test]
    fn det_known_3x3() {
        // Columns of [[2,0,1],[1,1,0],[0,3,1]] as rows of the transpose.
        let cols = vec![vec![2.0, 1.0, 0.0], vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0]];
        // det = 2*(1*1-0*3) - 0 + 1*(1*3-1*0) ... computed by cofactor: 2*1 + 1*3 = 5
        assert!((det_from_columns(&cols) - 5.0).abs() < 1e-12);
    }
}
