//! Optimality diagnostics: critical-point residual, Herglotz representation
//! of the multiplier, and the Lp norm bound.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{BepProblem, BepSolution};
use crate::error::Result;
use crate::fourier_core::{fft_analyze, norm_lp, project_plus, GridFunction};

/// Residuals of the optimality system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktDiagnostics {
    /// `||P+((g0 - f) v lambda g0)|| / ||f||_{L²(I)}`.
    pub critical_residual: f64,
    /// `max ||g0| - M|` over interior `J`.
    pub saturation_residual: f64,
    /// `Im <(f - g0) conj(g0), 1>_I`, zero at the optimum.
    pub mean_imag: f64,
}

/// Critical-point, saturation and mean-realness residuals of a solution.
pub fn kkt_residuals(sol: &BepSolution, p: &BepProblem) -> Result<KktDiagnostics> {
    let n = p.grid().n();
    let g = sol.g0_boundary.values();
    let f = p.f().values();
    let lam = sol.lambda.values();
    let u: Vec<Complex64> = (0..n).map(|k| (g[k] - f[k]) * p.chi_i(k) + g[k] * lam[k].re * p.chi_j(k)).collect();
    let res = project_plus(&fft_analyze(&GridFunction::new(p.grid(), u)?)).norm_l2();
    let fnorm = p.f_norm_sq().sqrt();
    let mean_imag: f64 = (0..n).map(|k| p.weights_i()[k] * ((f[k] - g[k]) * g[k].conj()).im).sum();
    Ok(KktDiagnostics {
        critical_residual: if fnorm > 0.0 { res / fnorm } else { res },
        saturation_residual: p.saturation(&sol.g0_boundary),
        mean_imag,
    })
}

/// `F(z) = (1/2 i pi) int_I (e^{it}+z)/(e^{it}-z) Im(conj(f) g0) dt` by quadrature over `I`.
///
/// On interior points of `J` the values are real and represent `lambda M²`.
pub fn herglotz_field(sol: &BepSolution, p: &BepProblem, z: &[Complex64]) -> Vec<Complex64> {
    let grid = p.grid();
    let terms: Vec<(Complex64, f64)> = (0..grid.n())
        .filter(|&k| p.weights_i()[k] > 0.0)
        .map(|k| {
            let u = (p.f().values()[k].conj() * sol.g0_boundary.values()[k]).im;
            (grid.point(k), p.weights_i()[k] * u)
        })
        .collect();
    let inv_i = Complex64::new(0.0, -1.0);
    z.par_iter().map(|&z| terms.iter().map(|&(x, wu)| (x + z) / (x - z) * wu).sum::<Complex64>() * inv_i).collect()
}

/// Herglotz representation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HerglotzReport {
    /// `max |F - avg(lambda) M²| / max(avg(lambda) M²)` over interior `J`,
    /// with `avg` the 1-2-1 neighbour average along the grid.
    pub residual: f64,
    /// Same comparison against the unaveraged multiplier.
    pub raw_residual: f64,
    /// Largest imaginary part of `F` on the checked points.
    pub max_imag: f64,
    /// Number of checked points.
    pub points: usize,
}

/// Compares `F` with `lambda M²` on interior `J` points.
pub fn herglotz_check(sol: &BepSolution, p: &BepProblem) -> HerglotzReport {
    let grid = p.grid();
    let n = grid.n();
    let idx = p.interior_j();
    let z: Vec<Complex64> = idx.iter().map(|&k| grid.point(k)).collect();
    let f_vals = herglotz_field(sol, p, &z);
    let lam = sol.lambda.re();
    let m = p.m();
    let smooth = |k: usize| 0.25 * lam[(k + n - 1) % n] + 0.5 * lam[k] + 0.25 * lam[(k + 1) % n];
    let compare = |target: &dyn Fn(usize) -> f64| {
        let scale = idx.iter().map(|&k| target(k)).fold(0.0, f64::max);
        let err = idx.iter().zip(&f_vals).map(|(&k, v)| (v.re - target(k)).abs()).fold(0.0, f64::max);
        if scale > 0.0 {
            err / scale
        } else {
            err
        }
    };
    HerglotzReport {
        residual: compare(&|k| smooth(k) * m[k] * m[k]),
        raw_residual: compare(&|k| lam[k] * m[k] * m[k]),
        max_imag: f_vals.iter().fold(0.0, |a, v| a.max(v.im.abs())),
        points: idx.len(),
    }
}

/// Outcome of the Lp norm bound `||g0||_{Lp(I)} <= 2 ||f||_{Lp(I)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpBound {
    /// `||g0||_{Lp(I)}`.
    pub lhs: f64,
    /// `2 ||f||_{Lp(I)} + 1e-6`.
    pub rhs: f64,
    /// `lhs <= rhs`.
    pub holds: bool,
}

/// Checks `||g0||_{Lp(I)} <= (1 + K) ||f||_{Lp(I)}` with `K = 1`.
pub fn lp_bound_check(sol: &BepSolution, p: &BepProblem, p_exp: f64) -> Result<LpBound> {
    let lhs = norm_lp(&sol.g0_boundary, p.arcs_i(), p_exp)?;
    let rhs = 2.0 * norm_lp(p.f(), p.arcs_i(), p_exp)? + 1e-6;
    Ok(LpBound { lhs, rhs, holds: lhs <= rhs })
}
