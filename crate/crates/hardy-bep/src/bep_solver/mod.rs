//! Dual-ascent solver for the bounded extremal problem.
//!
//! For a multiplier density `mu > 0` on `J` the Lagrangian
//! `||f - g||²_{L²(I)} + int_J mu (|g|² - M²)` is minimized over `H²` by
//! `g_mu`, the solution of the Toeplitz system `P+((chi_I + chi_J mu) g) = P+(chi_I f)`.
//! The dual functional `Phi(mu)` is concave with gradient `|g_mu|² - M²` on `J`;
//! its maximizer `lambda` yields the solution `g0 = g_lambda`.

mod diagnostics;
mod extension;
mod operators;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{BepError, Result};
use crate::fourier_core::{fft_synthesize, FourierSeries, Grid, GridFunction};
use crate::hardy_functions::{outer_oversampled, ArcSet, Membership, OuterFunction, EPS_MOD};

pub use diagnostics::{
    herglotz_check, herglotz_field, kkt_residuals, lp_bound_check, HerglotzReport, KktDiagnostics, LpBound,
};
pub use operators::{
    carleman_g_mu, dual_gradient, dual_state, dual_value, lagrangian_value, solve_toeplitz, toeplitz_apply, DualState,
};

/// Multiplier update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AscentRule {
    /// `mu <- mu exp(t (|g|² - M²))` with Armijo backtracking.
    #[default]
    Armijo,
    /// `mu <- mu |g|²/M²`, no monotonicity guarantee.
    FixedPoint,
}

/// Solver configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Grid size (power of two, at least 8).
    pub grid_n: usize,
    /// Ascent iteration cap.
    pub max_iters: usize,
    /// Duality-gap tolerance relative to `||f||²_{L²(I)}`.
    pub tol_gap: f64,
    /// Tolerance on `max ||g| - M|` over interior points of `J`.
    pub tol_saturation: f64,
    /// Armijo sufficient-increase constant.
    pub armijo_c: f64,
    /// Step reduction factor of the line search.
    pub backtrack_factor: f64,
    /// Lower clamp for `mu`.
    pub lambda_floor: f64,
    /// First trial step.
    pub initial_step: f64,
    /// Largest trial step.
    pub max_step: f64,
    /// Update rule.
    pub rule: AscentRule,
    /// Relative residual target of the Toeplitz conjugate-gradient solve.
    pub cg_tol: f64,
    /// Distance (in grid cells) from `∂J` below which points are excluded from sup-norm checks.
    pub interior_cells: usize,
    /// Highest degree tried by the extension fit.
    pub extension_max_degree: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid_n: 4096,
            max_iters: 500,
            tol_gap: 1e-6,
            tol_saturation: 1e-2,
            armijo_c: 1e-4,
            backtrack_factor: 0.5,
            lambda_floor: 1e-6,
            initial_step: 1.0,
            max_step: 1e6,
            rule: AscentRule::Armijo,
            cg_tol: 1e-10,
            interior_cells: 10,
            extension_max_degree: 64,
        }
    }
}

impl SolverOptions {
    /// Defaults on a grid of `n` points.
    pub fn with_grid(n: usize) -> Self {
        Self { grid_n: n, ..Self::default() }
    }

    /// Checks ranges.
    pub fn validate(&self) -> Result<()> {
        Grid::new(self.grid_n)?;
        let positive = [
            ("tol_gap", self.tol_gap),
            ("tol_saturation", self.tol_saturation),
            ("lambda_floor", self.lambda_floor),
            ("initial_step", self.initial_step),
            ("max_step", self.max_step),
            ("cg_tol", self.cg_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(BepError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("armijo_c", self.armijo_c), ("backtrack_factor", self.backtrack_factor)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(BepError::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }
}

/// Problem data: arc-set `I`, data `f`, bound `M`, options.
#[derive(Debug, Clone)]
pub struct BepProblem {
    grid: Grid,
    arcs_i: ArcSet,
    arcs_j: ArcSet,
    f: GridFunction,
    m: Vec<f64>,
    options: SolverOptions,
    w_i: Vec<f64>,
    w_j: Vec<f64>,
    floored: usize,
}

impl BepProblem {
    /// Builds a problem; arcs are snapped to the grid and `M` is floored on `J`.
    pub fn new(arcs_i: ArcSet, f: GridFunction, m: GridFunction, options: SolverOptions) -> Result<Self> {
        options.validate()?;
        let grid = Grid::new(options.grid_n)?;
        if f.grid() != grid {
            return Err(BepError::GridMismatch { left: grid.n(), right: f.grid().n() });
        }
        if m.grid() != grid {
            return Err(BepError::GridMismatch { left: grid.n(), right: m.grid().n() });
        }
        let arcs_i = arcs_i.snapped(grid)?;
        if arcs_i.is_empty() || arcs_i.is_full() {
            return Err(BepError::InvalidArcs("I and its complement must both have positive measure".into()));
        }
        let arcs_j = arcs_i.complement();
        let w_i = arcs_i.weights(grid)?;
        let w_j = arcs_j.weights(grid)?;
        let mut floored = 0;
        let mut mv = Vec::with_capacity(grid.n());
        for (k, v) in m.values().iter().enumerate() {
            if w_j[k] > 0.0 {
                if !v.re.is_finite() || v.re < 0.0 || v.im.abs() >= crate::fourier_core::REAL_TOL {
                    return Err(BepError::NonPositiveModulus(k));
                }
                if v.re < EPS_MOD {
                    floored += 1;
                }
                mv.push(v.re.max(EPS_MOD));
            } else {
                mv.push(1.0);
            }
        }
        Ok(Self { grid, arcs_i, arcs_j, f, m: mv, options, w_i, w_j, floored })
    }

    /// Problem with `M ≡ 1`.
    pub fn with_unit_bound(arcs_i: ArcSet, f: GridFunction, options: SolverOptions) -> Result<Self> {
        let grid = Grid::new(options.grid_n)?;
        Self::new(arcs_i, f, GridFunction::constant(grid, Complex64::new(1.0, 0.0)), options)
    }

    /// Working grid.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Snapped arc-set `I`.
    pub fn arcs_i(&self) -> &ArcSet {
        &self.arcs_i
    }

    /// Complement `J`.
    pub fn arcs_j(&self) -> &ArcSet {
        &self.arcs_j
    }

    /// Data samples.
    pub fn f(&self) -> &GridFunction {
        &self.f
    }

    /// Bound samples (floored on `J`, 1 elsewhere).
    pub fn m(&self) -> &[f64] {
        &self.m
    }

    /// Options.
    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    /// Replaces the options, keeping the grid.
    pub fn with_options(mut self, options: SolverOptions) -> Result<Self> {
        options.validate()?;
        if options.grid_n != self.grid.n() {
            return Err(BepError::GridMismatch { left: self.grid.n(), right: options.grid_n });
        }
        self.options = options;
        Ok(self)
    }

    /// Quadrature weights of `I`.
    pub fn weights_i(&self) -> &[f64] {
        &self.w_i
    }

    /// Quadrature weights of `J`.
    pub fn weights_j(&self) -> &[f64] {
        &self.w_j
    }

    /// Number of `J` points where `M` was raised to the floor.
    pub fn floored_points(&self) -> usize {
        self.floored
    }

    /// `||f||²_{L²(I)}`.
    pub fn f_norm_sq(&self) -> f64 {
        self.f.values().iter().zip(&self.w_i).map(|(v, w)| w * v.norm_sqr()).sum()
    }

    /// `J` grid points at least `interior_cells` away from `∂J`.
    pub fn interior_j(&self) -> Vec<usize> {
        self.arcs_j.interior_indices(self.grid, self.options.interior_cells).unwrap_or_default()
    }

    /// `J` grid points (endpoints included).
    pub fn j_indices(&self) -> Vec<usize> {
        (0..self.grid.n()).filter(|&k| self.w_j[k] > 0.0).collect()
    }

    pub(crate) fn chi_i(&self, k: usize) -> f64 {
        self.w_i[k] * self.grid.n() as f64
    }

    pub(crate) fn chi_j(&self, k: usize) -> f64 {
        self.w_j[k] * self.grid.n() as f64
    }

    /// `sum_I w |f - g|²` for boundary samples `g`.
    pub fn primal_value(&self, g: &GridFunction) -> f64 {
        self.f.values().iter().zip(g.values()).zip(&self.w_i).map(|((f, g), w)| w * (f - g).norm_sqr()).sum()
    }

    /// `max ||g| - M|` over interior points of `J`.
    pub fn saturation(&self, g: &GridFunction) -> f64 {
        self.interior_j().iter().map(|&k| (g.values()[k].norm() - self.m[k]).abs()).fold(0.0, f64::max)
    }
}

/// Solver output.
#[derive(Debug, Clone)]
pub struct BepSolution {
    /// Analytic coefficients of `g0`.
    pub g0: FourierSeries,
    /// Boundary samples of `g0`.
    pub g0_boundary: GridFunction,
    /// Multiplier density (real, zero off `J`).
    pub lambda: GridFunction,
    /// `||f - g0||²_{L²(I)}`.
    pub primal: f64,
    /// `Phi(lambda)`.
    pub dual: f64,
    /// `primal - dual`.
    pub gap: f64,
    /// `max ||g0| - M|` on interior `J`.
    pub saturation_residual: f64,
    /// Relative norm of `P+((g0 - f) v lambda g0)`.
    pub critical_residual: f64,
    /// Accepted ascent steps.
    pub iterations: usize,
    /// Stopping criteria met.
    pub converged: bool,
    /// `f` extends within the bound (solution from the extension fit, `lambda = 0`).
    pub extendable: bool,
    /// The line search could not find an increasing step.
    pub stalled: bool,
    /// Total conjugate-gradient iterations.
    pub cg_iterations: usize,
    /// Dual values of accepted iterates.
    pub phi_history: Vec<f64>,
    /// Worker threads available during the solve.
    pub threads: usize,
}

fn converged(p: &BepProblem, primal: f64, gap: f64, sat: f64) -> bool {
    let fn2 = p.f_norm_sq();
    primal <= 1e-10 * fn2 || (gap.abs() <= p.options.tol_gap * fn2 && sat <= p.options.tol_saturation)
}

/// Maximizes the dual functional and returns `g0 = g_lambda` with diagnostics.
pub fn solve_bep(p: &BepProblem) -> Result<BepSolution> {
    let opts = &p.options;
    let grid = p.grid;
    let j_idx = p.j_indices();
    let mut mu = vec![1.0; grid.n()];
    let mut state = dual_state(p, &mu, None)?;
    let mut cg_total = state.cg_iterations;
    let mut history = vec![state.phi_value];
    let mut t = opts.initial_step;
    let mut iterations = 0;
    let mut stalled = false;

    loop {
        let primal = p.primal_value(&state.g_boundary);
        let gap = primal - state.phi_value;
        let sat = p.saturation(&state.g_boundary);
        if converged(p, primal, gap, sat) || iterations >= opts.max_iters {
            break;
        }
        let grad = state.gradient.re();
        let (next_mu, next_state) = match opts.rule {
            AscentRule::Armijo => {
                t = (2.0 * t).min(opts.max_step);
                let mut accepted = None;
                while t >= 1e-12 {
                    let mut trial = mu.clone();
                    for &k in &j_idx {
                        trial[k] = (mu[k] * (t * grad[k]).exp()).max(opts.lambda_floor);
                    }
                    let s = match dual_state(p, &trial, Some(&state.g_mu)) {
                        Ok(s) => s,
                        Err(BepError::CgNotConverged { iterations, .. }) => {
                            cg_total += iterations;
                            t *= opts.backtrack_factor;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    cg_total += s.cg_iterations;
                    let dirder: f64 = j_idx.iter().map(|&k| p.w_j[k] * (trial[k] - mu[k]) * grad[k]).sum();
                    if s.phi_value >= state.phi_value + opts.armijo_c * dirder {
                        accepted = Some((trial, s));
                        break;
                    }
                    t *= opts.backtrack_factor;
                }
                match accepted {
                    Some(a) => a,
                    None => {
                        stalled = true;
                        break;
                    }
                }
            }
            AscentRule::FixedPoint => {
                let mut trial = mu.clone();
                for &k in &j_idx {
                    let g2 = state.g_boundary.values()[k].norm_sqr();
                    trial[k] = (mu[k] * g2 / (p.m[k] * p.m[k])).max(opts.lambda_floor);
                }
                match dual_state(p, &trial, Some(&state.g_mu)) {
                    Ok(s) => {
                        cg_total += s.cg_iterations;
                        (trial, s)
                    }
                    Err(BepError::CgNotConverged { iterations, .. }) => {
                        cg_total += iterations;
                        stalled = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        mu = next_mu;
        state = next_state;
        history.push(state.phi_value);
        iterations += 1;
    }

    let lambda_vals: Vec<f64> = (0..grid.n()).map(|k| if p.w_j[k] > 0.0 { mu[k] } else { 0.0 }).collect();
    let mut sol = BepSolution {
        g0: state.g_mu.clone(),
        g0_boundary: state.g_boundary.clone(),
        lambda: GridFunction::from_real(grid, &lambda_vals)?,
        primal: p.primal_value(&state.g_boundary),
        dual: state.phi_value,
        gap: 0.0,
        saturation_residual: p.saturation(&state.g_boundary),
        critical_residual: 0.0,
        iterations,
        converged: false,
        extendable: false,
        stalled,
        cg_iterations: cg_total,
        phi_history: history,
        threads: rayon::current_num_threads(),
    };
    if sol.primal > 1e-10 * p.f_norm_sq() {
        if let Some((g, primal)) = extension::fit_extension(p)? {
            sol.g0_boundary = fft_synthesize(&g);
            sol.g0 = g;
            sol.primal = primal;
            sol.lambda = GridFunction::from_real(grid, &vec![0.0; grid.n()])?;
            sol.saturation_residual = p.saturation(&sol.g0_boundary);
            sol.extendable = true;
        }
    } else {
        sol.extendable = true;
    }
    sol.gap = sol.primal - sol.dual;
    sol.converged = converged(p, sol.primal, sol.gap, sol.saturation_residual);
    sol.critical_residual = kkt_residuals(&sol, p)?.critical_residual;
    Ok(sol)
}

/// Normalized problem with `M ≡ 1` and the outer factor `w_M` (modulus 1 on `I`, `M` on `J`).
///
/// The solution of `p` is `w_M` times the solution of the normalized problem.
pub fn normalize_problem(p: &BepProblem) -> Result<(BepProblem, OuterFunction)> {
    let grid = p.grid;
    let h = grid.step();
    let log_m: Vec<f64> = p.m.iter().map(|m| m.ln()).collect();
    let arcs_i = p.arcs_i.clone();
    let log_rho = |theta: f64| match arcs_i.classify(theta) {
        Membership::Inside => 0.0,
        Membership::Boundary => 0.5 * log_m[grid.nearest_index(theta)],
        Membership::Outside => {
            let x = theta / h;
            let k0 = x.floor();
            let frac = x - k0;
            let k0 = (k0 as usize) % grid.n();
            let k1 = (k0 + 1) % grid.n();
            (1.0 - frac) * log_m[k0] + frac * log_m[k1]
        }
    };
    let w = outer_oversampled(grid, log_rho)?;
    let f = p.f.zip_with(w.boundary(), |f, w| f / w)?;
    let normalized = BepProblem::with_unit_bound(p.arcs_i.clone(), f, p.options.clone())?;
    Ok((normalized, w))
}

/// Multiplies an analytic series by the boundary trace of `w` and projects back.
pub fn denormalize(g: &FourierSeries, w: &OuterFunction) -> Result<FourierSeries> {
    let prod = fft_synthesize(g).zip_with(w.boundary(), |a, b| a * b)?;
    Ok(crate::fourier_core::project_plus(&crate::fourier_core::fft_analyze(&prod)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn options_validation() {
        assert!(SolverOptions::default().validate().is_ok());
        let bad = SolverOptions { armijo_c: 1.0, ..SolverOptions::default() };
        assert!(bad.validate().is_err());
        let bad = SolverOptions { lambda_floor: 0.0, ..SolverOptions::default() };
        assert!(bad.validate().is_err());
        let bad = SolverOptions { grid_n: 100, ..SolverOptions::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn problem_requires_both_sets() {
        let g = Grid::new(64).unwrap();
        let f = GridFunction::constant(g, c(1.0, 0.0));
        assert!(BepProblem::with_unit_bound(ArcSet::full(), f.clone(), SolverOptions::with_grid(64)).is_err());
        assert!(BepProblem::with_unit_bound(ArcSet::upper_half(), f, SolverOptions::with_grid(64)).is_ok());
    }

    #[test]
    fn bound_is_floored_on_j() {
        let g = Grid::new(64).unwrap();
        let f = GridFunction::constant(g, c(1.0, 0.0));
        let m = GridFunction::constant(g, c(0.0, 0.0));
        let p = BepProblem::new(ArcSet::upper_half(), f, m, SolverOptions::with_grid(64)).unwrap();
        assert_eq!(p.floored_points(), 33);
        assert!(p.j_indices().iter().all(|&k| p.m()[k] == EPS_MOD));
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let g = Grid::new(128).unwrap();
        let f = GridFunction::constant(g, c(0.0, 0.0));
        let p = BepProblem::with_unit_bound(ArcSet::upper_half(), f, SolverOptions::with_grid(128)).unwrap();
        let sol = solve_bep(&p).unwrap();
        assert!(sol.converged);
        assert_eq!(sol.iterations, 0);
        assert!(sol.g0.norm_l2() == 0.0);
    }

    #[test]
    fn unit_bound_normalization_is_identity() {
        let g = Grid::new(256).unwrap();
        let f = GridFunction::from_fn(g, |t| c(t.cos(), 1.0));
        let p = BepProblem::with_unit_bound(ArcSet::upper_half(), f, SolverOptions::with_grid(256)).unwrap();
        let (q, w) = normalize_problem(&p).unwrap();
        assert!(w.boundary().values().iter().all(|v| (v - 1.0).norm() < 1e-14));
        for (a, b) in q.f().values().iter().zip(p.f().values()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_bound_outer_round_trip() {
        let n = 1024;
        let g = Grid::new(n).unwrap();
        let f = GridFunction::constant(g, c(1.0, 0.0));
        let m = GridFunction::constant(g, c(2.0, 0.0));
        let p = BepProblem::new(ArcSet::upper_half(), f, m, SolverOptions::with_grid(n)).unwrap();
        let (_, w) = normalize_problem(&p).unwrap();
        let i = ArcSet::upper_half();
        for k in 0..n {
            let th = g.theta(k);
            if i.distance_to_boundary(th) < 10.0 * g.step() {
                continue;
            }
            let target = if th < PI { 1.0 } else { 2.0 };
            assert!((w.boundary().values()[k].norm() - target).abs() < 1e-3, "k={k}");
        }
    }
}
