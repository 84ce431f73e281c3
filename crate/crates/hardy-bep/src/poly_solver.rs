//! Degree-`n` polynomial approximation on `I` under `|p| <= 1` on `J`.
//!
//! The semi-infinite constraint is handled by an exchange loop over a finite
//! set of points of `J`. Each finitely constrained convex QP is solved by a
//! log-barrier Newton method in the `2(n+1)` real coordinates of the
//! coefficients. Optimality is certified by non-negative multipliers at
//! active points recovered from the stationarity system.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bep_solver::{BepProblem, BepSolution};
use crate::error::{BepError, Result};
use crate::fourier_core::{fft_analyze, fft_synthesize, norm_l2, FourierSeries, Grid, GridFunction};
use crate::hardy_functions::ArcSet;
use crate::linalg::nnls;

/// Exchange and QP settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolyOptions {
    /// Stop when `max_J |k_n| - 1` is at most this value.
    pub exchange_tol: f64,
    /// Only maxima with `|k_n| > 1 + add_tol` enter the constraint set.
    pub add_tol: f64,
    /// The violation search uses `fine_factor * max(n, 1)` points on `J`.
    pub fine_factor: usize,
    /// Exchange round budget.
    pub max_rounds: usize,
    /// Barrier stops when `constraints / t` falls below this value.
    pub barrier_gap: f64,
    /// Newton centering stops when half the squared decrement falls below this value.
    pub newton_tol: f64,
    /// Points with `|k_n| >= 1 - active_tol` are candidates for the certificate.
    pub active_tol: f64,
}

impl Default for PolyOptions {
    fn default() -> Self {
        Self {
            exchange_tol: 1e-8,
            add_tol: 1e-10,
            fine_factor: 16,
            max_rounds: 100,
            barrier_gap: 1e-12,
            newton_tol: 1e-10,
            active_tol: 1e-6,
        }
    }
}

/// Finite-dimensional problem: degree, data on `I`, constraint points in `J`.
#[derive(Debug, Clone)]
pub struct PolyProblem {
    arcs_i: ArcSet,
    arcs_j: ArcSet,
    f: GridFunction,
    degree: usize,
    constraint_points: Vec<f64>,
    options: PolyOptions,
}

impl PolyProblem {
    /// Problem seeded with `4(n+1)` equispaced points of `J`.
    pub fn new(arcs_i: ArcSet, f: GridFunction, degree: usize) -> Result<Self> {
        let grid = f.grid();
        if degree >= grid.n() / 2 {
            return Err(BepError::InvalidParameter(format!(
                "degree {degree} exceeds grid capacity {}",
                grid.n() / 2 - 1
            )));
        }
        let arcs_i = arcs_i.snapped(grid)?;
        if arcs_i.is_empty() || arcs_i.is_full() {
            return Err(BepError::InvalidArcs("I and its complement must both have positive measure".into()));
        }
        let arcs_j = arcs_i.complement();
        let constraint_points = spread(&arcs_j, 4 * (degree + 1), true);
        Ok(Self { arcs_i, arcs_j, f, degree, constraint_points, options: PolyOptions::default() })
    }

    /// Replaces the initial constraint points; all must lie in `J` and there must be at least `4(n+1)`.
    pub fn with_constraint_points(mut self, points: Vec<f64>) -> Result<Self> {
        if points.len() < 4 * (self.degree + 1) {
            return Err(BepError::InvalidParameter(format!(
                "{} constraint points, at least {} required",
                points.len(),
                4 * (self.degree + 1)
            )));
        }
        if let Some(x) = points.iter().find(|&&x| !self.arcs_j.contains(x)) {
            return Err(BepError::InvalidParameter(format!("constraint point {x} is not in J")));
        }
        self.constraint_points = points;
        Ok(self)
    }

    /// Replaces the solver settings.
    pub fn with_options(mut self, options: PolyOptions) -> Self {
        self.options = options;
        self
    }

    /// Polynomial degree.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Snapped `I`.
    pub fn arcs_i(&self) -> &ArcSet {
        &self.arcs_i
    }

    /// Complement `J`.
    pub fn arcs_j(&self) -> &ArcSet {
        &self.arcs_j
    }

    /// Initial constraint points.
    pub fn constraint_points(&self) -> &[f64] {
        &self.constraint_points
    }

    /// `||f||²_{L²(I)}` by grid quadrature.
    pub fn f_norm_sq(&self) -> Result<f64> {
        Ok(norm_l2(&self.f, &self.arcs_i)?.powi(2))
    }
}

/// `count` points spread over the arcs proportionally to length.
/// With `midpoints` the points avoid the endpoints; otherwise endpoints are included.
fn spread(arcs: &ArcSet, count: usize, midpoints: bool) -> Vec<f64> {
    let total = arcs.measure();
    let mut out = Vec::new();
    for &(a, b) in arcs.arcs() {
        let k = ((count as f64) * (b - a) / total).ceil().max(2.0) as usize;
        for i in 0..k {
            let x = if midpoints {
                a + (b - a) * (i as f64 + 0.5) / k as f64
            } else {
                a + (b - a) * i as f64 / (k - 1) as f64
            };
            out.push(x.rem_euclid(2.0 * PI));
        }
    }
    out
}

/// Active points and non-negative multipliers certifying optimality.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Active angles `x_i` in `J`.
    pub points: Vec<f64>,
    /// Multipliers `lambda_i >= 0`.
    pub multipliers: Vec<f64>,
    /// Norm of `<k - f, e_m>_I + sum lambda_i k(x_i) e^{-i m x_i}` over `m = 0..n`.
    pub residual: f64,
    /// `sum lambda_i`.
    pub multiplier_sum: f64,
    /// `2 ||f||² + 1e-6`.
    pub multiplier_bound: f64,
    /// Signs, point count and multiplier bound all satisfied.
    pub valid: bool,
}

/// Solution of the polynomial problem.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySolution {
    /// Degree `n`.
    pub degree: usize,
    /// Coefficients of `k_n(z) = sum c_k z^k`.
    pub coeffs: Vec<Complex64>,
    /// Certificate points.
    pub active_points: Vec<f64>,
    /// Certificate multipliers.
    pub multipliers: Vec<f64>,
    /// `||f - k_n||²_{L²(I)}`.
    pub primal: f64,
    /// Certificate residual.
    pub stationarity_residual: f64,
    /// `max_J |k_n| - 1` at the last violation search.
    pub max_violation: f64,
    /// Exchange rounds performed.
    pub rounds: usize,
    /// Final constraint set.
    pub constraint_points: Vec<f64>,
    /// Certificate validity.
    pub certificate_valid: bool,
}

impl PolySolution {
    /// `k_n` at `e^{i x}`.
    pub fn eval(&self, x: f64) -> Complex64 {
        poly_eval(&self.coeffs, x)
    }

    /// `k_n` as a series on `grid`.
    pub fn series(&self, grid: Grid) -> Result<FourierSeries> {
        FourierSeries::from_polynomial(grid, &self.coeffs)
    }
}

fn poly_eval(c: &[Complex64], x: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, x);
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Gram matrix `G[k][m] = <e^{ik.}, e^{im.}>_I` in closed form.
pub fn gram_matrix(arcs_i: &ArcSet, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n + 1, n + 1, |k, m| arcs_i.moment(k as i64 - m as i64))
}

struct Objective {
    a: DMatrix<Complex64>,
    m: DVector<Complex64>,
    h: DMatrix<f64>,
    b: DVector<f64>,
    fn2: f64,
}

impl Objective {
    fn new(p: &PolyProblem) -> Result<Self> {
        let d = p.degree;
        let g = gram_matrix(&p.arcs_i, d);
        let a = g.transpose();
        let w = p.arcs_i.weights(p.f.grid())?;
        let n = p.f.grid().n();
        let wf: Vec<Complex64> = p.f.values().iter().zip(&w).map(|(v, w)| v * w * n as f64).collect();
        let s = fft_analyze(&GridFunction::new(p.f.grid(), wf)?);
        let m = DVector::from_fn(d + 1, |k, _| s.coeff(k as i64));
        let r = d + 1;
        let h = DMatrix::from_fn(2 * r, 2 * r, |i, j| {
            let v = a[(i % r, j % r)];
            match (i < r, j < r) {
                (true, true) | (false, false) => v.re,
                (true, false) => -v.im,
                (false, true) => v.im,
            }
        });
        let b = DVector::from_fn(2 * r, |i, _| if i < r { m[i].re } else { m[i - r].im });
        Ok(Self { a, m, h, b, fn2: p.f_norm_sq()? })
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        (x.dot(&(&self.h * x)) - 2.0 * self.b.dot(x) + self.fn2).max(0.0)
    }

    fn residual(&self, c: &[Complex64]) -> DVector<Complex64> {
        &self.a * DVector::from_column_slice(c) - &self.m
    }
}

struct Constraints {
    er: DMatrix<f64>,
    ei: DMatrix<f64>,
}

impl Constraints {
    fn new(points: &[f64], d: usize) -> Self {
        let r = d + 1;
        let er = DMatrix::from_fn(points.len(), 2 * r, |j, i| {
            let k = (i % r) as f64;
            if i < r {
                (k * points[j]).cos()
            } else {
                -(k * points[j]).sin()
            }
        });
        let ei = DMatrix::from_fn(points.len(), 2 * r, |j, i| {
            let k = (i % r) as f64;
            if i < r {
                (k * points[j]).sin()
            } else {
                (k * points[j]).cos()
            }
        });
        Self { er, ei }
    }

    fn slack(&self, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>, DVector<f64>) {
        let u = &self.er * x;
        let v = &self.ei * x;
        let s = DVector::from_fn(u.len(), |j, _| 1.0 - u[j] * u[j] - v[j] * v[j]);
        (u, v, s)
    }
}

fn barrier(obj: &Objective, con: &Constraints, x: &DVector<f64>, t: f64) -> f64 {
    let (_, _, s) = con.slack(x);
    if s.iter().any(|&v| v <= 0.0) {
        return f64::INFINITY;
    }
    t * obj.value(x) - s.iter().map(|v| v.ln()).sum::<f64>()
}

fn newton_direction(obj: &Objective, con: &Constraints, x: &DVector<f64>, t: f64) -> Result<(DVector<f64>, f64)> {
    let (u, v, s) = con.slack(x);
    let mut q = con.er.clone();
    let mut er_w = con.er.clone();
    let mut ei_w = con.ei.clone();
    for j in 0..s.len() {
        let w1 = 2.0 / s[j];
        let mut qr = q.row_mut(j);
        qr *= u[j];
        qr += con.ei.row(j) * v[j];
        er_w.row_mut(j).scale_mut(w1);
        ei_w.row_mut(j).scale_mut(w1);
    }
    let mut q_w = q.clone();
    for j in 0..s.len() {
        q_w.row_mut(j).scale_mut(4.0 / (s[j] * s[j]));
    }
    let inv = DVector::from_fn(s.len(), |j, _| 2.0 / s[j]);
    let grad = (&obj.h * x - &obj.b) * (2.0 * t) + q.tr_mul(&inv);
    let hess = &obj.h * (2.0 * t) + con.er.tr_mul(&er_w) + con.ei.tr_mul(&ei_w) + q.tr_mul(&q_w);
    let neg = -&grad;
    let dx = match hess.clone().cholesky() {
        Some(ch) => ch.solve(&neg),
        None => hess.lu().solve(&neg).ok_or_else(|| BepError::QpFailure("singular Newton system".into()))?,
    };
    let dec = grad.dot(&dx);
    Ok((dx, dec))
}

/// Barrier method on a fixed constraint set; `x0` must be strictly feasible.
fn solve_qp(obj: &Objective, points: &[f64], d: usize, x0: DVector<f64>, opts: &PolyOptions) -> Result<DVector<f64>> {
    let con = Constraints::new(points, d);
    let mut x = x0;
    let mut t = 1.0;
    let m = points.len().max(1) as f64;
    loop {
        for _ in 0..100 {
            let (dx, dec) = newton_direction(obj, &con, &x, t)?;
            if -dec / 2.0 < opts.newton_tol || !dec.is_finite() {
                break;
            }
            let f0 = barrier(obj, &con, &x, t);
            let mut step = 1.0;
            let mut moved = false;
            while step > 1e-20 {
                let trial = &x + &dx * step;
                let f1 = barrier(obj, &con, &trial, t);
                if f1 <= f0 + 0.25 * step * dec {
                    x = trial;
                    moved = f0 - f1 > 1e-13 * f0.abs().max(1.0);
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if m / t < opts.barrier_gap {
            break;
        }
        t *= 10.0;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(BepError::QpFailure("non-finite iterate".into()));
    }
    Ok(x)
}

fn to_complex(x: &DVector<f64>) -> Vec<Complex64> {
    let r = x.len() / 2;
    (0..r).map(|k| Complex64::new(x[k], x[k + r])).collect()
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        x1
    } else {
        x2
    }
}

/// Refined local maxima of `|k|` on `J` and the largest value of `|k|` found.
fn local_maxima(c: &[Complex64], arcs_j: &ArcSet, samples: usize) -> (Vec<(f64, f64)>, f64) {
    let total = arcs_j.measure();
    let mut out = Vec::new();
    let mut best = 0.0f64;
    for &(a, b) in arcs_j.arcs() {
        let k = (((samples as f64) * (b - a) / total).ceil() as usize).max(8);
        let xs: Vec<f64> = (0..=k).map(|i| a + (b - a) * i as f64 / k as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| poly_eval(c, x).norm()).collect();
        best = vals.iter().fold(best, |m, &v| m.max(v));
        for i in 0..=k {
            let left = i == 0 || vals[i] >= vals[i - 1];
            let right = i == k || vals[i] >= vals[i + 1];
            if !(left && right) {
                continue;
            }
            let lo = xs[i.saturating_sub(1)];
            let hi = xs[(i + 1).min(k)];
            let x = golden_max(|x| poly_eval(c, x).norm(), lo, hi);
            let (x, v) = {
                let v = poly_eval(c, x).norm();
                if v >= vals[i] {
                    (x, v)
                } else {
                    (xs[i], vals[i])
                }
            };
            best = best.max(v);
            out.push((x.rem_euclid(2.0 * PI), v));
        }
    }
    (out, best)
}

/// Solves the polynomial problem by exchange and returns it with a certificate.
pub fn solve_fbep(p: &PolyProblem) -> Result<PolySolution> {
    let d = p.degree;
    let opts = &p.options;
    let obj = Objective::new(p)?;
    let mut points = p.constraint_points.clone();
    let mut x = DVector::zeros(2 * (d + 1));
    let samples = opts.fine_factor * d.max(1);
    for round in 0..opts.max_rounds {
        let con = Constraints::new(&points, d);
        let (u, v, _) = con.slack(&x);
        let pm = (0..u.len()).map(|j| u[j].hypot(v[j])).fold(0.0, f64::max);
        if pm > 0.9 {
            x *= 0.9 / pm;
        }
        x = solve_qp(&obj, &points, d, x, opts)?;
        let c = to_complex(&x);
        let (maxima, best) = local_maxima(&c, &p.arcs_j, samples);
        let violation = best - 1.0;
        let new: Vec<f64> = maxima
            .into_iter()
            .filter(|&(_, v)| v > 1.0 + opts.add_tol)
            .map(|(x, _)| x)
            .filter(|x| points.iter().all(|q| (q - x).abs() > 1e-12))
            .collect();
        if violation <= opts.exchange_tol || new.is_empty() {
            let mut sol = PolySolution {
                degree: d,
                primal: obj.value(&x),
                coeffs: c,
                active_points: Vec::new(),
                multipliers: Vec::new(),
                stationarity_residual: 0.0,
                max_violation: violation,
                rounds: round + 1,
                constraint_points: points,
                certificate_valid: false,
            };
            let cert = certificate(&obj, &sol, p)?;
            sol.active_points = cert.points;
            sol.multipliers = cert.multipliers;
            sol.stationarity_residual = cert.residual;
            sol.certificate_valid = cert.valid;
            return Ok(sol);
        }
        points.extend(new);
    }
    let c = to_complex(&x);
    let (_, best) = local_maxima(&c, &p.arcs_j, samples);
    Err(BepError::ExchangeNotConverged { rounds: opts.max_rounds, violation: best - 1.0 })
}

fn stationarity_matrix(c: &[Complex64], points: &[f64]) -> DMatrix<f64> {
    let r = c.len();
    DMatrix::from_fn(2 * r, points.len(), |row, i| {
        let m = (row % r) as f64;
        let v = poly_eval(c, points[i]) * Complex64::from_polar(1.0, -m * points[i]);
        if row < r {
            v.re
        } else {
            v.im
        }
    })
}

fn certificate(obj: &Objective, sol: &PolySolution, p: &PolyProblem) -> Result<Certificate> {
    let d = sol.degree;
    let r = d + 1;
    let r0 = obj.residual(&sol.coeffs);
    let rhs = DVector::from_fn(2 * r, |i, _| if i < r { -r0[i].re } else { -r0[i - r].im });
    let bound = 2.0 * obj.fn2 + 1e-6;
    let mut cands: Vec<f64> =
        sol.constraint_points.iter().copied().filter(|&x| sol.eval(x).norm() >= 1.0 - p.options.active_tol).collect();
    cands.sort_by(f64::total_cmp);
    if cands.is_empty() {
        return Ok(Certificate {
            points: Vec::new(),
            multipliers: Vec::new(),
            residual: rhs.norm(),
            multiplier_sum: 0.0,
            multiplier_bound: bound,
            valid: true,
        });
    }
    let lam = nnls(&stationarity_matrix(&sol.coeffs, &cands), &rhs);
    let width = 2.0 * PI / (64.0 * d.max(1) as f64);
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut last: Option<f64> = None;
    for (i, &x) in cands.iter().enumerate() {
        if lam[i] <= 0.0 {
            continue;
        }
        match (merged.last_mut(), last) {
            (Some((sx, sw)), Some(prev)) if x - prev <= width => {
                *sx += lam[i] * x;
                *sw += lam[i];
            }
            _ => merged.push((lam[i] * x, lam[i])),
        }
        last = Some(x);
    }
    let pts: Vec<f64> = merged.iter().map(|(sx, sw)| sx / sw).collect();
    let a = stationarity_matrix(&sol.coeffs, &pts);
    let lam = nnls(&a, &rhs);
    let residual = (&a * &lam - &rhs).norm();
    let (points, multipliers): (Vec<f64>, Vec<f64>) =
        pts.iter().zip(lam.iter()).filter(|(_, &l)| l > 0.0).map(|(&x, &l)| (x, l)).unzip();
    let multiplier_sum: f64 = multipliers.iter().sum();
    let valid = multipliers.iter().all(|&l| l >= -1e-6) && points.len() <= 2 * r && multiplier_sum <= bound;
    Ok(Certificate { points, multipliers, residual, multiplier_sum, multiplier_bound: bound, valid })
}

/// Recomputes the certificate of a solution.
pub fn kkt_certificate(sol: &PolySolution, p: &PolyProblem) -> Result<Certificate> {
    certificate(&Objective::new(p)?, sol, p)
}

/// One row of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    /// Degree `n`.
    pub degree: usize,
    /// `||k_n - g0||_{L²(T)}`.
    pub l2_circle: f64,
    /// `||k_n - g0||_{L²(J)}`.
    pub l2_j: f64,
    /// `||f - k_n||²_{L²(I)}`.
    pub primal: f64,
}

/// Solves the polynomial problem for each degree and compares with `g0`.
///
/// Requires `M ≡ 1` on `J`; other bounds must be normalized first.
pub fn convergence_study(sol: &BepSolution, p: &BepProblem, degrees: &[usize]) -> Result<Vec<ConvergenceRow>> {
    convergence_study_with(sol, p, degrees, &PolyOptions::default())
}

/// [`convergence_study`] with explicit exchange settings.
pub fn convergence_study_with(
    sol: &BepSolution,
    p: &BepProblem,
    degrees: &[usize],
    options: &PolyOptions,
) -> Result<Vec<ConvergenceRow>> {
    if p.j_indices().iter().any(|&k| (p.m()[k] - 1.0).abs() > 1e-12) {
        return Err(BepError::InvalidParameter("polynomial solver expects M = 1; normalize first".into()));
    }
    let grid = p.grid();
    degrees
        .par_iter()
        .map(|&d| {
            let pp = PolyProblem::new(p.arcs_i().clone(), p.f().clone(), d)?.with_options(options.clone());
            let ps = solve_fbep(&pp)?;
            let k = ps.series(grid)?;
            let diff = k.sub(&sol.g0)?;
            Ok(ConvergenceRow {
                degree: d,
                l2_circle: diff.norm_l2(),
                l2_j: norm_l2(&fft_synthesize(&diff), p.arcs_j())?,
                primal: ps.primal,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gram_full_circle_is_identity() {
        let g = gram_matrix(&ArcSet::full(), 5);
        for k in 0..6 {
            for m in 0..6 {
                let e = if k == m { 1.0 } else { 0.0 };
                assert!((g[(k, m)] - e).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_upper_half_entries() {
        let g = gram_matrix(&ArcSet::upper_half(), 4);
        assert!((g[(1, 1)] - 0.5).norm() < 1e-15);
        assert!((g[(1, 0)] - c(0.0, 1.0 / PI)).norm() < 1e-15);
        for k in 0..5 {
            for m in 0..5 {
                assert!((g[(k, m)] - g[(m, k)].conj()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_eigenvalues_in_unit_interval() {
        let g = gram_matrix(&ArcSet::new(&[(0.3, 2.0), (3.0, 4.1)]).unwrap(), 12);
        let h = DMatrix::from_fn(26, 26, |i, j| {
            let v = g[(i % 13, j % 13)];
            match (i < 13, j < 13) {
                (true, true) | (false, false) => v.re,
                (true, false) => -v.im,
                (false, true) => v.im,
            }
        });
        for e in h.symmetric_eigenvalues().iter() {
            assert!(*e > -1e-14 && *e <= 1.0 + 1e-12, "{e}");
        }
    }

    #[test]
    fn seeds_lie_in_j() {
        let grid = Grid::new(256).unwrap();
        let f = GridFunction::constant(grid, c(2.0, 0.0));
        let p = PolyProblem::new(ArcSet::upper_half(), f, 3).unwrap();
        assert_eq!(p.constraint_points().len(), 16);
        assert!(p.constraint_points().iter().all(|&x| x > PI && x < 2.0 * PI));
        assert!(p.clone().with_constraint_points(vec![4.0; 3]).is_err());
        assert!(p.with_constraint_points(vec![1.0; 16]).is_err());
    }

    #[test]
    fn golden_section_finds_peak() {
        let x = golden_max(|x| -(x - 0.3).powi(2), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-7);
    }
}
