//! Carleman recovery of an analytic function from its values on `I`.
//!
//! With a quenching function `phi` (outer, `|phi| = e^s` on `I`, `1` on `J`),
//! `f_n(z) = (1/2 pi i) int_I (phi(xi)/phi(z))^n f(xi)/(xi - z) dxi` converges
//! to `F(z)` for every `z` in the disk when `f` is the trace of `F ∈ H²`.
//!
//! The boundary phase of `phi` has logarithmic singularities at the endpoints
//! of `I`, and the weight grows like `e^{ns}` there, so the integral is
//! evaluated with Gauss-Legendre panels graded toward each endpoint. `phi` is
//! known in closed form for arc-sets; `f` is interpolated from grid samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{BepError, Result};
use crate::fourier_core::{Grid, GridFunction};
use crate::hardy_functions::{outer_oversampled, ArcSet, Membership, OuterFunction};

const GL_POINTS: usize = 20;
const GRADING_LEVELS: usize = 60;
const MAX_PANEL: f64 = 0.05;
const INTERP_DEGREE: usize = 8;

/// Largest admissible `|z|` for recovery.
pub const MAX_RADIUS: f64 = 0.99;

/// Outer function with `log|phi| = s chi_I`.
#[derive(Debug, Clone)]
pub struct QuenchingFunction {
    arcs: ArcSet,
    strength: f64,
    /// Grid representation (oversampled construction).
    pub outer: OuterFunction,
}

/// Builds the quenching function of `arcs` with strength `s > 0`.
pub fn quenching_function(arcs: &ArcSet, s: f64, grid: Grid) -> Result<QuenchingFunction> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(BepError::InvalidParameter(format!("strength must be positive, got {s}")));
    }
    let arcs = arcs.snapped(grid)?;
    if arcs.is_empty() || arcs.is_full() {
        return Err(BepError::InvalidArcs("I and its complement must both have positive measure".into()));
    }
    let a2 = arcs.clone();
    let outer = outer_oversampled(grid, move |t| match a2.classify(t) {
        Membership::Inside => s,
        Membership::Boundary => 0.5 * s,
        Membership::Outside => 0.0,
    })?;
    Ok(QuenchingFunction { arcs, strength: s, outer })
}

impl QuenchingFunction {
    /// Strength `s`.
    pub fn strength(&self) -> f64 {
        self.strength
    }

    /// Snapped arc-set `I`.
    pub fn arcs(&self) -> &ArcSet {
        &self.arcs
    }

    /// `log phi(z)` for `|z| < 1` in closed form.
    pub fn log_eval(&self, z: Complex64) -> Complex64 {
        let s = self.strength;
        let one = Complex64::new(1.0, 0.0);
        self.arcs
            .arcs()
            .iter()
            .map(|&(a, b)| {
                let l =
                    (one - z * Complex64::from_polar(1.0, -b)).ln() - (one - z * Complex64::from_polar(1.0, -a)).ln();
                (Complex64::new(b - a, 0.0) - Complex64::new(0.0, 2.0) * l) * (s / (2.0 * PI))
            })
            .sum()
    }

    /// `phi(z)` for `|z| < 1`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.log_eval(z).exp()
    }

    /// Boundary `log phi` at the point of arc `arc` located `x` radians from
    /// its start (`from_end = false`) or its end (`from_end = true`).
    fn boundary_log(&self, arc: usize, x: f64, from_end: bool) -> Complex64 {
        let s = self.strength;
        let (a0, b0) = self.arcs.arcs()[arc];
        let len = b0 - a0;
        let theta = if from_end { b0 - x } else { a0 + x };
        let mut phase = 0.0;
        for (j, &(a, b)) in self.arcs.arcs().iter().enumerate() {
            let (da, db) = if j == arc {
                if from_end {
                    (len - x, x)
                } else {
                    (x, len - x)
                }
            } else {
                (((theta - a) / 2.0).sin().abs() * 2.0, ((theta - b) / 2.0).sin().abs() * 2.0)
            };
            let (sa, sb) =
                if j == arc { ((da / 2.0).sin().abs(), (db / 2.0).sin().abs()) } else { (da / 2.0, db / 2.0) };
            phase += (sa / sb).ln();
        }
        Complex64::new(s, s / PI * phase)
    }
}

fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -t;
        x[m - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

struct Node {
    arc: usize,
    offset: f64,
    from_end: bool,
    weight: f64,
}

fn nodes(arcs: &ArcSet) -> Vec<Node> {
    let (gx, gw) = gauss_legendre(GL_POINTS);
    let mut out = Vec::new();
    for (arc, &(a, b)) in arcs.arcs().iter().enumerate() {
        let half = 0.5 * (b - a);
        let mut edges = vec![0.0];
        edges.extend((1..=GRADING_LEVELS).rev().map(|k| half * 0.5f64.powi(k as i32)));
        edges.push(half);
        for from_end in [false, true] {
            for e in edges.windows(2) {
                let pieces = ((e[1] - e[0]) / MAX_PANEL).ceil().max(1.0) as usize;
                let h = (e[1] - e[0]) / pieces as f64;
                for p in 0..pieces {
                    let (u, v) = (e[0] + h * p as f64, e[0] + h * (p + 1) as f64);
                    for (x, w) in gx.iter().zip(&gw) {
                        out.push(Node {
                            arc,
                            offset: 0.5 * (u + v) + 0.5 * (v - u) * x,
                            from_end,
                            weight: 0.5 * (v - u) * w,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Local Lagrange interpolation of grid samples along a snapped arc.
fn interpolate(f: &GridFunction, start: usize, cells: usize, offset_cells: f64) -> Complex64 {
    let deg = INTERP_DEGREE.min(cells);
    let n = f.grid().n();
    let k0 = ((offset_cells.floor() as i64) - (deg as i64) / 2 + 1).clamp(0, (cells - deg) as i64) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in k0..=k0 + deg {
        let mut l = 1.0;
        for m in k0..=k0 + deg {
            if m != j {
                l *= (offset_cells - m as f64) / (j as f64 - m as f64);
            }
        }
        acc += f.values()[(start + j) % n] * l;
    }
    acc
}

/// `f_n(z)` for `n = 1..=n_max`.
pub fn recover_sequence(
    f_on_i: &GridFunction,
    phi: &QuenchingFunction,
    z: Complex64,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    if !(z.norm() <= MAX_RADIUS) {
        return Err(BepError::TooCloseToBoundary { z, margin: 1.0 - MAX_RADIUS });
    }
    if n_max == 0 {
        return Err(BepError::InvalidParameter("n_max must be at least 1".into()));
    }
    let grid = f_on_i.grid();
    let h = grid.step();
    let grid_arcs = phi.arcs.grid_arcs(grid)?;
    let lz = phi.log_eval(z);
    let mut ratio = Vec::new();
    let mut base = Vec::new();
    for node in nodes(&phi.arcs) {
        let (a, b) = phi.arcs.arcs()[node.arc];
        let (start, cells) = grid_arcs[node.arc];
        let theta = if node.from_end { b - node.offset } else { a + node.offset };
        let offset_cells = if node.from_end { cells as f64 - node.offset / h } else { node.offset / h };
        let fv = interpolate(f_on_i, start, cells, offset_cells);
        let xi = Complex64::from_polar(1.0, theta);
        ratio.push((phi.boundary_log(node.arc, node.offset, node.from_end) - lz).exp());
        base.push(fv * xi / (xi - z) * (node.weight / (2.0 * PI)));
    }
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        for (b, r) in base.iter_mut().zip(&ratio) {
            *b *= r;
        }
        out.push(base.iter().sum());
    }
    Ok(out)
}

/// Runs [`recover_sequence`] at several points in parallel (output in input order).
pub fn recover_many(
    f_on_i: &GridFunction,
    phi: &QuenchingFunction,
    z: &[Complex64],
    n_max: usize,
) -> Result<Vec<Vec<Complex64>>> {
    z.par_iter().map(|&z| recover_sequence(f_on_i, phi, z, n_max)).collect()
}
