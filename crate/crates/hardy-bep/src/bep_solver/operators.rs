//! Toeplitz and Carleman evaluations of `g_mu`, the dual value and its gradient.

use super::BepProblem;
use crate::error::{BepError, Result};
use crate::fourier_core::{fft_analyze, fft_synthesize, project_minus, project_plus, FourierSeries, GridFunction};
use crate::hardy_functions::outer_from_log_modulus;

/// Dual iterate: `mu`, the minimizer `g_mu`, `Phi(mu)` and the gradient.
#[derive(Debug, Clone)]
pub struct DualState {
    /// Multiplier samples (only `J` entries are meaningful).
    pub mu: Vec<f64>,
    /// Analytic coefficients of `g_mu`.
    pub g_mu: FourierSeries,
    /// Boundary samples of `g_mu`.
    pub g_boundary: GridFunction,
    /// `Phi(mu)`.
    pub phi_value: f64,
    /// `|g_mu|² - M²` on `J`, zero elsewhere.
    pub gradient: GridFunction,
    /// Conjugate-gradient iterations spent.
    pub cg_iterations: usize,
}

fn symbol(p: &BepProblem, mu: &[f64]) -> Vec<f64> {
    (0..p.grid().n()).map(|k| p.chi_i(k) + p.chi_j(k) * mu[k]).collect()
}

fn check_mu(p: &BepProblem, mu: &[f64]) -> Result<()> {
    if mu.len() != p.grid().n() {
        return Err(BepError::LengthMismatch { expected: p.grid().n(), got: mu.len() });
    }
    let floor = p.options().lambda_floor;
    for k in p.j_indices() {
        if !(mu[k] >= floor * (1.0 - 1e-12)) || !mu[k].is_finite() {
            return Err(BepError::InvalidParameter(format!(
                "multiplier {} at index {k} is below the floor {floor}",
                mu[k]
            )));
        }
    }
    Ok(())
}

fn real_samples(mu: &GridFunction) -> Result<Vec<f64>> {
    let im = mu.max_imag();
    if im >= crate::fourier_core::REAL_TOL {
        return Err(BepError::NotReal(im));
    }
    Ok(mu.re())
}

fn apply_symbol(sigma: &[f64], c: &FourierSeries) -> FourierSeries {
    let u = fft_synthesize(c);
    let v = GridFunction::new(u.grid(), u.values().iter().zip(sigma).map(|(v, s)| v * s).collect()).expect("same grid");
    project_plus(&fft_analyze(&v))
}

fn re_dot(a: &FourierSeries, b: &FourierSeries) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x * y.conj()).re).sum()
}

/// Conjugate gradient for `P+(sigma g) = rhs` on analytic coefficient vectors.
pub(crate) fn cg_solve(
    sigma: &[f64],
    rhs: &FourierSeries,
    x0: Option<&FourierSeries>,
    tol: f64,
) -> Result<(FourierSeries, usize)> {
    let n = rhs.grid().n();
    let bnorm = rhs.norm_l2();
    if bnorm == 0.0 {
        return Ok((FourierSeries::zeros(rhs.grid()), 0));
    }
    let mut x = match x0 {
        Some(x0) => project_plus(x0),
        None => FourierSeries::zeros(rhs.grid()),
    };
    let mut r = rhs.sub(&apply_symbol(sigma, &x))?;
    let mut p = r.clone();
    let mut rr = re_dot(&r, &r);
    let cap = 10 * n;
    let mut it = 0;
    while rr.sqrt() > tol * bnorm {
        if it >= cap {
            return Err(BepError::CgNotConverged { iterations: it, residual: rr.sqrt() / bnorm });
        }
        let ap = apply_symbol(sigma, &p);
        let alpha = rr / re_dot(&p, &ap);
        x = x.zip_with(&p, |a, b| a + b * alpha)?;
        r = r.zip_with(&ap, |a, b| a - b * alpha)?;
        let rn = re_dot(&r, &r);
        let beta = rn / rr;
        p = r.zip_with(&p, |a, b| a + b * beta)?;
        rr = rn;
        it += 1;
    }
    Ok((x, it))
}

fn rhs(p: &BepProblem) -> FourierSeries {
    let chi_f = GridFunction::new(p.grid(), p.f().values().iter().enumerate().map(|(k, v)| v * p.chi_i(k)).collect())
        .expect("same grid");
    project_plus(&fft_analyze(&chi_f))
}

/// `P+((0 v (lambda - 1)) g)`: the Toeplitz operator with symbol `lambda - 1` on `J`.
pub fn toeplitz_apply(p: &BepProblem, lambda: &GridFunction, g: &FourierSeries) -> Result<FourierSeries> {
    let lam = real_samples(lambda)?;
    if lam.len() != p.grid().n() || g.grid() != p.grid() {
        return Err(BepError::GridMismatch { left: p.grid().n(), right: g.grid().n() });
    }
    let s: Vec<f64> = (0..p.grid().n()).map(|k| p.chi_j(k) * (lam[k] - 1.0)).collect();
    Ok(apply_symbol(&s, g))
}

/// Solves `(I + T) g = P+(f v 0)` by conjugate gradient, `T` with symbol `lambda - 1` on `J`.
pub fn solve_toeplitz(p: &BepProblem, lambda: &GridFunction) -> Result<FourierSeries> {
    let lam = real_samples(lambda)?;
    check_mu(p, &lam)?;
    Ok(cg_solve(&symbol(p, &lam), &rhs(p), None, p.options().cg_tol)?.0)
}

/// `sum_I w |f - g|² + sum_J w mu (|g|² - M²)`.
pub fn lagrangian_value(p: &BepProblem, mu: &[f64], g: &GridFunction) -> f64 {
    let m = p.m();
    let wj = p.weights_j();
    let penalty: f64 = (0..p.grid().n())
        .filter(|&k| wj[k] > 0.0)
        .map(|k| wj[k] * mu[k] * (g.values()[k].norm_sqr() - m[k] * m[k]))
        .sum();
    p.primal_value(g) + penalty
}

/// Dual iterate at `mu`, optionally warm-starting the Toeplitz solve.
pub fn dual_state(p: &BepProblem, mu: &[f64], warm: Option<&FourierSeries>) -> Result<DualState> {
    check_mu(p, mu)?;
    let (g_mu, cg_iterations) = cg_solve(&symbol(p, mu), &rhs(p), warm, p.options().cg_tol)?;
    let g_boundary = fft_synthesize(&g_mu);
    let phi_value = lagrangian_value(p, mu, &g_boundary);
    let m = p.m();
    let wj = p.weights_j();
    let grad: Vec<f64> = (0..p.grid().n())
        .map(|k| if wj[k] > 0.0 { g_boundary.values()[k].norm_sqr() - m[k] * m[k] } else { 0.0 })
        .collect();
    Ok(DualState {
        mu: mu.to_vec(),
        g_mu,
        g_boundary,
        phi_value,
        gradient: GridFunction::from_real(p.grid(), &grad)?,
        cg_iterations,
    })
}

struct CarlemanParts {
    w: GridFunction,
    f_tilde: GridFunction,
    sigma: Vec<f64>,
}

fn carleman_parts(p: &BepProblem, mu: &[f64]) -> Result<CarlemanParts> {
    check_mu(p, mu)?;
    let sigma = symbol(p, mu);
    let half_log: Vec<f64> = sigma.iter().map(|s| 0.5 * s.ln()).collect();
    let w = outer_from_log_modulus(&GridFunction::from_real(p.grid(), &half_log)?)?.boundary().clone();
    let f_tilde = GridFunction::new(
        p.grid(),
        p.f().values().iter().enumerate().map(|(k, v)| v * p.chi_i(k) / sigma[k]).collect(),
    )?;
    Ok(CarlemanParts { w, f_tilde, sigma })
}

/// `g_mu = (1/w) P+(w f~)` with `w` outer of modulus `sqrt(chi_I + chi_J mu)`.
pub fn carleman_g_mu(p: &BepProblem, mu: &GridFunction) -> Result<FourierSeries> {
    let mu = real_samples(mu)?;
    let parts = carleman_parts(p, &mu)?;
    let wf = parts.w.zip_with(&parts.f_tilde, |a, b| a * b)?;
    let inner = fft_synthesize(&project_plus(&fft_analyze(&wf)));
    let g = inner.zip_with(&parts.w, |a, b| a / b)?;
    Ok(project_plus(&fft_analyze(&g)))
}

/// `Phi(mu) = ||P-(w f~)||² - int_J mu M²` plus the endpoint correction of the discrete weights.
pub fn dual_value(p: &BepProblem, mu: &GridFunction) -> Result<f64> {
    let mu = real_samples(mu)?;
    let parts = carleman_parts(p, &mu)?;
    let wf = parts.w.zip_with(&parts.f_tilde, |a, b| a * b)?;
    let minus = project_minus(&fft_analyze(&wf)).norm_l2().powi(2);
    let n = p.grid().n() as f64;
    let m = p.m();
    let mut endpoint = 0.0;
    let mut bound = 0.0;
    for k in 0..p.grid().n() {
        let fv = p.f().values()[k];
        endpoint += (p.chi_i(k) * fv.norm_sqr() - parts.sigma[k] * parts.f_tilde.values()[k].norm_sqr()) / n;
        bound += p.weights_j()[k] * mu[k] * m[k] * m[k];
    }
    Ok(minus + endpoint - bound)
}

/// `|g_mu|² - M²` on `J` (zero elsewhere).
pub fn dual_gradient(p: &BepProblem, mu: &GridFunction) -> Result<GridFunction> {
    let mu = real_samples(mu)?;
    Ok(dual_state(p, &mu, None)?.gradient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bep_solver::SolverOptions;
    use crate::hardy_functions::ArcSet;
    use nalgebra::{DMatrix, DVector};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn problem(n: usize, f: impl Fn(f64) -> Complex64) -> BepProblem {
        let g = crate::fourier_core::Grid::new(n).unwrap();
        BepProblem::with_unit_bound(ArcSet::upper_half(), GridFunction::from_fn(g, f), SolverOptions::with_grid(n))
            .unwrap()
    }

    #[test]
    fn unit_symbol_is_identity() {
        let p = problem(64, |t| c(t.cos(), t.sin() * 2.0));
        let one = GridFunction::constant(p.grid(), c(1.0, 0.0));
        let g = FourierSeries::from_modes(p.grid(), &[(0, c(1.0, 2.0)), (3, c(-1.0, 0.5))]);
        assert!(toeplitz_apply(&p, &one, &g).unwrap().norm_l2() < 1e-15);
        let zero = FourierSeries::zeros(p.grid());
        let lam = GridFunction::constant(p.grid(), c(3.0, 0.0));
        assert!(toeplitz_apply(&p, &lam, &zero).unwrap().norm_l2() == 0.0);
        let sol = solve_toeplitz(&p, &one).unwrap();
        assert!(sol.sub(&rhs(&p)).unwrap().norm_l2() < 1e-14);
    }

    #[test]
    fn toeplitz_solve_matches_dense_oracle() {
        let n = 256;
        let p = problem(n, |t| Complex64::from_polar(0.5, t));
        let grid = p.grid();
        let lam: Vec<f64> = (0..n).map(|k| 1.0 + 0.8 * (grid.theta(k) * 3.0).sin().powi(2)).collect();
        let sigma = symbol(&p, &lam);
        let h = n / 2;
        let a = DMatrix::from_fn(h, h, |m, k| {
            (0..n)
                .map(|j| Complex64::from_polar(sigma[j] / n as f64, (k as f64 - m as f64) * grid.theta(j)))
                .sum::<Complex64>()
        });
        let r = rhs(&p);
        let b = DVector::from_fn(h, |m, _| r.coeffs()[m]);
        let x = a.lu().solve(&b).unwrap();
        let got = solve_toeplitz(&p, &GridFunction::from_real(grid, &lam).unwrap()).unwrap();
        for m in 0..h {
            assert!((got.coeffs()[m] - x[m]).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_data_gradient_is_minus_one() {
        let p = problem(128, |_| c(0.0, 0.0));
        let mu = GridFunction::constant(p.grid(), c(2.0, 0.0));
        let grad = dual_gradient(&p, &mu).unwrap();
        for k in p.j_indices() {
            assert!((grad.values()[k].re + 1.0).abs() < 1e-15);
        }
        assert!(carleman_g_mu(&p, &mu).unwrap().norm_l2() == 0.0);
    }

    #[test]
    fn unit_multiplier_specialization() {
        let p = problem(512, |t| c(2.0 + t.sin(), 0.3));
        let one = GridFunction::constant(p.grid(), c(1.0, 0.0));
        let chi_f =
            GridFunction::new(p.grid(), p.f().values().iter().enumerate().map(|(k, v)| v * p.chi_i(k)).collect())
                .unwrap();
        let endpoint: f64 =
            (0..512).map(|k| (p.chi_i(k) - p.chi_i(k).powi(2)) * p.f().values()[k].norm_sqr() / 512.0).sum();
        let expected =
            project_minus(&fft_analyze(&chi_f)).norm_l2().powi(2) + endpoint - p.weights_j().iter().sum::<f64>();
        assert!((dual_value(&p, &one).unwrap() - expected).abs() < 1e-13);
        let g1 = carleman_g_mu(&p, &one).unwrap();
        assert!(g1.sub(&rhs(&p)).unwrap().norm_l2() < 1e-13);
    }

    #[test]
    fn floor_violation_is_rejected() {
        let p = problem(64, |_| c(1.0, 0.0));
        let mu = GridFunction::constant(p.grid(), c(0.0, 0.0));
        assert!(matches!(solve_toeplitz(&p, &mu), Err(BepError::InvalidParameter(_))));
    }
}
