//! Low-degree least-squares fits on `I`, used to detect data that extend
//! analytically within the bound.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::BepProblem;
use crate::error::Result;
use crate::fourier_core::{fft_analyze, fft_synthesize, FourierSeries, GridFunction};
use crate::linalg::hpd_solve;

const MIN_PIVOT_RATIO: f64 = 1e-14;

/// Returns the first polynomial fit (increasing degree) that satisfies the
/// bound on `J` and has `primal <= 1e-10 ||f||²`.
pub(super) fn fit_extension(p: &BepProblem) -> Result<Option<(FourierSeries, f64)>> {
    let grid = p.grid();
    let n = grid.n();
    let fn2 = p.f_norm_sq();
    let dmax = p.options().extension_max_degree.min(n / 4 - 1);
    let chi_i: Vec<f64> = (0..n).map(|k| p.chi_i(k)).collect();
    let chi = fft_analyze(&GridFunction::from_real(grid, &chi_i)?);
    let chi_f = fft_analyze(&GridFunction::new(grid, p.f().values().iter().zip(&chi_i).map(|(v, c)| v * c).collect())?);
    let toeplitz = |q: i64| chi.coeff(-q);
    let j_idx = p.j_indices();
    for d in 0..=dmax {
        let a = DMatrix::from_fn(d + 1, d + 1, |m, k| toeplitz(k as i64 - m as i64));
        let b = DVector::from_fn(d + 1, |m, _| chi_f.coeff(m as i64));
        let Some(c) = hpd_solve(a, &b, MIN_PIVOT_RATIO) else {
            break;
        };
        let coeffs: Vec<Complex64> = c.iter().copied().collect();
        let g = FourierSeries::from_polynomial(grid, &coeffs)?;
        let gb = fft_synthesize(&g);
        let feasible = j_idx.iter().all(|&k| gb.values()[k].norm() <= p.m()[k] * (1.0 + 1e-9));
        if !feasible {
            continue;
        }
        let primal = p.primal_value(&gb);
        if primal <= 1e-10 * fn2 {
            return Ok(Some((g, primal)));
        }
    }
    Ok(None)
}
