//! Arc-sets, outer functions, Riesz-Herglotz transforms, Blaschke products
//! and evaluation of analytic series inside the disk.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{BepError, Result};
use crate::fourier_core::{conjugate_function, fft_analyze, FourierSeries, Grid, GridFunction};

const TWO_PI: f64 = 2.0 * PI;
const ANGLE_TOL: f64 = 1e-12;

/// Modulus floor applied before taking logarithms.
pub const EPS_MOD: f64 = 1e-8;

/// Evaluation points must satisfy `|z| <= 1 - DISK_MARGIN`.
pub const DISK_MARGIN: f64 = 1e-6;

/// Oversampling factor for outer functions of piecewise-constant moduli.
pub const OVERSAMPLE: usize = 4;

/// Finite union of disjoint closed arcs of the circle.
///
/// Arcs are stored as `(a, b)` with `a` in `[0, 2 pi)` and `a < b <= a + 2 pi`,
/// sorted by `a`. Touching arcs are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
}

/// Position of an angle relative to an arc-set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Strictly inside one of the arcs.
    Inside,
    /// At an arc endpoint (within `1e-12`).
    Boundary,
    /// Strictly outside every arc.
    Outside,
}

impl ArcSet {
    /// Builds an arc-set from `(a, b)` radian pairs with `a < b <= a + 2 pi`.
    pub fn new(arcs: &[(f64, f64)]) -> Result<Self> {
        let mut v = Vec::with_capacity(arcs.len());
        for &(a, b) in arcs {
            if !a.is_finite() || !b.is_finite() {
                return Err(BepError::InvalidArcs(format!("non-finite endpoint in ({a}, {b})")));
            }
            let len = b - a;
            if len <= 0.0 {
                return Err(BepError::InvalidArcs(format!("arc ({a}, {b}) has non-positive length")));
            }
            if len > TWO_PI + ANGLE_TOL {
                return Err(BepError::InvalidArcs(format!("arc ({a}, {b}) is longer than 2 pi")));
            }
            if len >= TWO_PI - ANGLE_TOL {
                if arcs.len() > 1 {
                    return Err(BepError::InvalidArcs("full circle combined with other arcs".into()));
                }
                return Ok(Self::full());
            }
            let a0 = a.rem_euclid(TWO_PI);
            v.push((a0, a0 + len));
        }
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            if let Some(last) = merged.last_mut() {
                if a < last.1 - ANGLE_TOL {
                    return Err(BepError::InvalidArcs(format!("arcs ({}, {}) and ({a}, {b}) overlap", last.0, last.1)));
                }
                if a <= last.1 + ANGLE_TOL {
                    last.1 = b;
                    continue;
                }
            }
            merged.push((a, b));
        }
        if merged.len() > 1 {
            let (fa, fb) = merged[0];
            let (la, lb) = merged[merged.len() - 1];
            if lb > fa + TWO_PI + ANGLE_TOL {
                return Err(BepError::InvalidArcs(format!("arcs ({la}, {lb}) and ({fa}, {fb}) overlap")));
            }
            if lb >= fa + TWO_PI - ANGLE_TOL {
                let total = fb - fa + lb - la;
                merged.pop();
                merged[0] = (la, la + total);
            }
        }
        if merged.len() == 1 && merged[0].1 - merged[0].0 >= TWO_PI - ANGLE_TOL {
            return Ok(Self::full());
        }
        Ok(Self { arcs: merged })
    }

    /// The whole circle.
    pub fn full() -> Self {
        Self { arcs: vec![(0.0, TWO_PI)] }
    }

    /// The empty set.
    pub fn empty() -> Self {
        Self { arcs: Vec::new() }
    }

    /// Upper half-circle `[0, pi]`.
    pub fn upper_half() -> Self {
        Self { arcs: vec![(0.0, PI)] }
    }

    /// Arcs as `(a, b)` pairs.
    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    /// True when no arcs are present.
    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// True for the whole circle.
    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].1 - self.arcs[0].0 >= TWO_PI - ANGLE_TOL
    }

    /// Total length in radians.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(a, b)| b - a).sum()
    }

    /// Complementary arc-set (closure of the complement).
    pub fn complement(&self) -> Self {
        if self.is_empty() {
            return Self::full();
        }
        if self.is_full() {
            return Self::empty();
        }
        let k = self.arcs.len();
        let arcs = (0..k)
            .map(|i| {
                let b = self.arcs[i].1;
                let next = if i + 1 < k { self.arcs[i + 1].0 } else { self.arcs[0].0 + TWO_PI };
                let a0 = b.rem_euclid(TWO_PI);
                (a0, a0 + (next - b))
            })
            .collect::<Vec<_>>();
        let mut out = Self { arcs };
        out.arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
        out
    }

    /// Classifies an angle relative to the set.
    pub fn classify(&self, theta: f64) -> Membership {
        if self.is_full() {
            return Membership::Inside;
        }
        let mut boundary = false;
        for &(a, b) in &self.arcs {
            let x = (theta - a).rem_euclid(TWO_PI);
            let len = b - a;
            let near_start = !(ANGLE_TOL..=TWO_PI - ANGLE_TOL).contains(&x);
            let near_end = (x - len).abs() < ANGLE_TOL;
            if near_start || near_end {
                boundary = true;
            } else if x < len {
                return Membership::Inside;
            }
        }
        if boundary {
            Membership::Boundary
        } else {
            Membership::Outside
        }
    }

    /// True when `theta` lies in the closed set.
    pub fn contains(&self, theta: f64) -> bool {
        self.classify(theta) != Membership::Outside
    }

    /// Distance in radians from `theta` to the nearest endpoint.
    pub fn distance_to_boundary(&self, theta: f64) -> f64 {
        if self.is_full() || self.is_empty() {
            return f64::INFINITY;
        }
        self.arcs
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .map(|e| {
                let d = (theta - e).rem_euclid(TWO_PI);
                d.min(TWO_PI - d)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Grid-snapped arcs as `(start index, number of cells)`.
    pub fn grid_arcs(&self, grid: Grid) -> Result<Vec<(usize, usize)>> {
        if self.is_full() {
            return Ok(vec![(0, grid.n())]);
        }
        let h = grid.step();
        let mut out = Vec::with_capacity(self.arcs.len());
        for &(a, b) in &self.arcs {
            let start = grid.nearest_index(a);
            let cells = ((b / h).round() - (a / h).round()).max(0.0) as usize;
            if cells == 0 {
                return Err(BepError::InvalidArcs(format!("arc ({a}, {b}) is shorter than half a grid cell")));
            }
            out.push((start, cells));
        }
        Ok(out)
    }

    /// Copy with endpoints moved to the nearest grid angles.
    pub fn snapped(&self, grid: Grid) -> Result<Self> {
        if self.is_empty() || self.is_full() {
            return Ok(self.clone());
        }
        let h = grid.step();
        let arcs =
            self.grid_arcs(grid)?.into_iter().map(|(s, c)| (s as f64 * h, (s + c) as f64 * h)).collect::<Vec<_>>();
        let total: usize = self.grid_arcs(grid)?.iter().map(|a| a.1).sum();
        if total >= grid.n() {
            return Ok(Self::full());
        }
        Self::new(&arcs)
    }

    /// Quadrature weights on the grid: `1/n` inside, `1/(2n)` at snapped endpoints.
    ///
    /// The weights of a set and of its complement add up to `1/n` at every point.
    pub fn weights(&self, grid: Grid) -> Result<Vec<f64>> {
        let n = grid.n();
        let mut w = vec![0.0; n];
        if self.is_empty() {
            return Ok(w);
        }
        let snapped = self.snapped(grid)?;
        if snapped.is_full() {
            return Ok(vec![1.0 / n as f64; n]);
        }
        for (start, cells) in snapped.grid_arcs(grid)? {
            for j in 0..=cells {
                let k = (start + j) % n;
                w[k] += if j == 0 || j == cells { 0.5 } else { 1.0 } / n as f64;
            }
        }
        Ok(w)
    }

    /// Grid indices at distance of at least `cells` grid steps from every endpoint.
    pub fn interior_indices(&self, grid: Grid, cells: usize) -> Result<Vec<usize>> {
        let snapped = self.snapped(grid)?;
        if snapped.is_full() {
            return Ok((0..grid.n()).collect());
        }
        let mut out = Vec::new();
        for (start, len) in snapped.grid_arcs(grid)? {
            if len >= 2 * cells {
                out.extend((cells..=len - cells).map(|j| (start + j) % grid.n()));
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Exact arc moment `(1/2 pi) int_E e^{i q theta} dtheta`.
    pub fn moment(&self, q: i64) -> Complex64 {
        if q == 0 {
            return Complex64::new(self.measure() / TWO_PI, 0.0);
        }
        let qf = q as f64;
        self.arcs
            .iter()
            .map(|&(a, b)| {
                (Complex64::from_polar(1.0, qf * b) - Complex64::from_polar(1.0, qf * a))
                    / Complex64::new(0.0, TWO_PI * qf)
            })
            .sum()
    }
}

/// Outer function given by its boundary log-modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterFunction {
    /// Boundary `log|w|`.
    pub log_modulus: GridFunction,
    /// Coefficients of `log w = log_modulus + i conj(log_modulus)`.
    ///
    /// The Nyquist mode of the log-modulus is kept so that the real part of
    /// the synthesized series reproduces `log_modulus` exactly.
    pub analytic_log: FourierSeries,
    /// Boundary values `exp(log_modulus + i conj(log_modulus))`.
    boundary: GridFunction,
}

impl OuterFunction {
    fn from_parts(log_modulus: GridFunction, conj: GridFunction) -> Result<Self> {
        let log_w = log_modulus.zip_with(&conj, |a, b| Complex64::new(a.re, b.re))?;
        let analytic_log = fft_analyze(&log_w);
        let boundary = log_w.map(|v| v.exp());
        Ok(Self { log_modulus, analytic_log, boundary })
    }

    /// Boundary trace on the grid.
    pub fn boundary(&self) -> &GridFunction {
        &self.boundary
    }

    /// Value at the origin, `exp(mean(log_modulus))`.
    pub fn at_origin(&self) -> f64 {
        self.log_modulus.mean().re.exp()
    }

    /// Disk values through the Riesz-Herglotz transform of the log-modulus.
    pub fn eval(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        Ok(riesz_herglotz(&self.log_modulus, z)?.into_iter().map(|v| v.exp()).collect())
    }
}

/// Finite Blaschke product `c z^k prod (|a|/a)(a - z)/(1 - conj(a) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    unimodular_constant: Complex64,
    order_at_origin: usize,
}

impl BlaschkeProduct {
    /// Builds the product; zeros at the origin are folded into `order_at_origin`.
    pub fn new(zeros: &[Complex64], unimodular_constant: Complex64, order_at_origin: usize) -> Result<Self> {
        if (unimodular_constant.norm() - 1.0).abs() > 1e-12 {
            return Err(BepError::InvalidParameter(format!("constant {unimodular_constant} is not unimodular")));
        }
        let mut order = order_at_origin;
        let mut kept = Vec::with_capacity(zeros.len());
        for &a in zeros {
            if !(a.norm() < 1.0) {
                return Err(BepError::InvalidParameter(format!("zero {a} is not in the open disk")));
            }
            if a == Complex64::new(0.0, 0.0) {
                order += 1;
            } else {
                kept.push(a);
            }
        }
        Ok(Self { zeros: kept, unimodular_constant, order_at_origin: order })
    }

    /// Non-origin zeros.
    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// Multiplicity of the zero at the origin.
    pub fn order_at_origin(&self) -> usize {
        self.order_at_origin
    }

    /// Boundary trace on the grid.
    pub fn boundary(&self, grid: Grid) -> Result<GridFunction> {
        let values = (0..grid.n()).map(|k| blaschke_eval(self, grid.point(k))).collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid, values)
    }
}

/// Evaluates a Blaschke product; fails at the poles `1/conj(a)`.
pub fn blaschke_eval(b: &BlaschkeProduct, z: Complex64) -> Result<Complex64> {
    let mut v = b.unimodular_constant * z.powu(b.order_at_origin as u32);
    for &a in &b.zeros {
        let den = Complex64::new(1.0, 0.0) - a.conj() * z;
        if den.norm() < 1e-14 {
            return Err(BepError::Pole(z));
        }
        v *= (a.norm() / a) * (a - z) / den;
    }
    Ok(v)
}

fn check_disk(z: &[Complex64]) -> Result<()> {
    for &p in z {
        if !(p.norm() <= 1.0 - DISK_MARGIN) {
            return Err(BepError::TooCloseToBoundary { z: p, margin: DISK_MARGIN });
        }
    }
    Ok(())
}

/// Riesz-Herglotz transform `(1/2 pi) int (e^{it}+z)/(e^{it}-z) h dt` by grid quadrature.
pub fn riesz_herglotz(h: &GridFunction, z: &[Complex64]) -> Result<Vec<Complex64>> {
    let im = h.max_imag();
    if im >= crate::fourier_core::REAL_TOL {
        return Err(BepError::NotReal(im));
    }
    check_disk(z)?;
    let grid = h.grid();
    let n = grid.n() as f64;
    let xi: Vec<Complex64> = (0..grid.n()).map(|k| grid.point(k)).collect();
    let hv = h.re();
    Ok(z.par_iter().map(|&z| xi.iter().zip(&hv).map(|(&x, &h)| (x + z) / (x - z) * h).sum::<Complex64>() / n).collect())
}

fn log_of_modulus(rho: &GridFunction) -> Result<Vec<f64>> {
    rho.values()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if !v.re.is_finite() || v.re < 0.0 || v.im.abs() >= crate::fourier_core::REAL_TOL {
                Err(BepError::NonPositiveModulus(k))
            } else {
                Ok(v.re.max(EPS_MOD).ln())
            }
        })
        .collect()
}

/// Outer function with boundary modulus `rho` (floored at [`EPS_MOD`]).
pub fn outer_from_modulus(rho: &GridFunction) -> Result<OuterFunction> {
    let logs = log_of_modulus(rho)?;
    outer_from_log_modulus(&GridFunction::from_real(rho.grid(), &logs)?)
}

/// Outer function with boundary log-modulus `log_rho`.
pub fn outer_from_log_modulus(log_rho: &GridFunction) -> Result<OuterFunction> {
    let conj = conjugate_function(log_rho)?;
    OuterFunction::from_parts(log_rho.map(|v| Complex64::new(v.re, 0.0)), conj)
}

/// Outer function whose log-modulus is sampled from `log_rho(theta)` on a grid
/// [`OVERSAMPLE`] times finer than `grid`, then restricted to `grid`.
pub fn outer_oversampled(grid: Grid, log_rho: impl Fn(f64) -> f64) -> Result<OuterFunction> {
    let fine = Grid::new(grid.n() * OVERSAMPLE)?;
    let fine_log = GridFunction::from_real_fn(fine, &log_rho);
    let fine_conj = conjugate_function(&fine_log)?;
    let restrict = |u: &GridFunction| GridFunction::new(grid, u.values().iter().step_by(OVERSAMPLE).copied().collect());
    OuterFunction::from_parts(restrict(&fine_log)?, restrict(&fine_conj)?)
}

/// Power-series evaluation `sum_m c_m z^m` of an analytic series.
pub fn eval_disk(g: &FourierSeries, z: &[Complex64]) -> Result<Vec<Complex64>> {
    g.ensure_analytic(1e-12)?;
    check_disk(z)?;
    let c = g.analytic_coeffs(g.grid().n() / 2 - 1);
    Ok(z.par_iter().map(|&z| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)).collect())
}

/// Cauchy integral `(1/2 pi i) int g(xi)/(xi - z) dxi` by grid quadrature.
pub fn cauchy_integral(boundary: &GridFunction, z: &[Complex64]) -> Result<Vec<Complex64>> {
    check_disk(z)?;
    let grid = boundary.grid();
    let n = grid.n() as f64;
    let xi: Vec<Complex64> = (0..grid.n()).map(|k| grid.point(k)).collect();
    Ok(z.par_iter()
        .map(|&z| xi.iter().zip(boundary.values()).map(|(&x, &g)| g * x / (x - z)).sum::<Complex64>() / n)
        .collect())
}
