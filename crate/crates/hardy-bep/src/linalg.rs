//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Non-negative least squares `min ||A x - b||, x >= 0` (Lawson-Hanson active set).
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let (m, k) = a.shape();
    let mut x = DVector::zeros(k);
    if k == 0 {
        return x;
    }
    let scale = a.iter().fold(0.0f64, |s, v| s.max(v.abs())).max(1e-300);
    let tol = 10.0 * f64::EPSILON * scale * (m.max(k) as f64) * b.norm().max(1.0);
    let mut passive = vec![false; k];
    let mut w = a.transpose() * (b - a * &x);
    for _outer in 0..3 * k + 10 {
        let pick = (0..k).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = pick else { break };
        passive[j] = true;
        for _inner in 0..3 * k + 10 {
            let idx: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let s = subset_lstsq(a, b, &idx);
            if s.iter().all(|&v| v > 0.0) {
                for (p, &j) in idx.iter().enumerate() {
                    x[j] = s[p];
                }
                break;
            }
            let mut alpha = 1.0f64;
            for (p, &j) in idx.iter().enumerate() {
                if s[p] <= 0.0 {
                    let d = x[j] - s[p];
                    if d > 0.0 {
                        alpha = alpha.min(x[j] / d);
                    }
                }
            }
            for (p, &j) in idx.iter().enumerate() {
                x[j] += alpha * (s[p] - x[j]);
                if x[j] <= tol {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
        w = a.transpose() * (b - a * &x);
    }
    x
}

fn subset_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, idx: &[usize]) -> Vec<f64> {
    let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
    let svd = sub.svd(true, true);
    let eps = svd.singular_values.max() * 1e-14;
    match svd.solve(b, eps) {
        Ok(s) => s.iter().copied().collect(),
        Err(_) => vec![0.0; idx.len()],
    }
}

/// Solves the Hermitian positive definite system `A x = b`.
///
/// Returns `None` when Cholesky fails or when the squared pivot ratio drops
/// below `min_pivot_ratio`.
pub(crate) fn hpd_solve(
    a: DMatrix<Complex64>,
    b: &DVector<Complex64>,
    min_pivot_ratio: f64,
) -> Option<DVector<Complex64>> {
    let chol = a.cholesky()?;
    let l = chol.l_dirty();
    let diag: Vec<f64> = (0..l.nrows()).map(|i| l[(i, i)].re).collect();
    let max = diag.iter().fold(0.0f64, |m, v| m.max(*v));
    let min = diag.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    if !(min > 0.0) || (min / max).powi(2) < min_pivot_ratio {
        return None;
    }
    Some(chol.solve(b))
}
