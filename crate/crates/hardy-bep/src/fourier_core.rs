//! Uniform-grid spectral calculus on the unit circle.
//!
//! Samples live on `theta_k = 2 pi k / n`. Fourier coefficients use the
//! normalization `c_m = (1/n) sum_k u_k e^{-i m theta_k}`, so the constant
//! function 1 has `c_0 = 1` and Parseval reads `sum |c_m|^2 = mean |u_k|^2`.
//! Coefficients are stored in FFT order: slot `k` holds frequency `k` for
//! `k < n/2` and `k - n` otherwise, i.e. frequencies cover `[-n/2, n/2 - 1]`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{BepError, Result};
use crate::hardy_functions::ArcSet;

/// Tolerance on imaginary parts for functions treated as real.
pub const REAL_TOL: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Uniform grid of `n` points on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    /// Creates a grid; `n` must be a power of two and at least 8.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(BepError::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `2 pi / n`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Angle of point `k` (taken modulo `n`).
    pub fn theta(&self, k: usize) -> f64 {
        2.0 * PI * (k % self.n) as f64 / self.n as f64
    }

    /// All grid angles.
    pub fn thetas(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.theta(k)).collect()
    }

    /// Unit-circle point `e^{i theta_k}`.
    pub fn point(&self, k: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.theta(k))
    }

    /// Index of the grid angle nearest to `theta` (any real angle).
    pub fn nearest_index(&self, theta: f64) -> usize {
        let x = theta.rem_euclid(2.0 * PI) / self.step();
        (x.round() as usize) % self.n
    }

    /// Storage slot of frequency `m` in FFT order.
    pub fn slot(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    /// Frequency stored in slot `k`.
    pub fn frequency(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    fn check_same(&self, other: &Grid) -> Result<()> {
        if self.n != other.n {
            return Err(BepError::GridMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    /// Wraps samples; the length must equal `grid.n()`.
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(BepError::LengthMismatch { expected: grid.n(), got: values.len() });
        }
        Ok(Self { grid, values })
    }

    /// Real samples.
    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Samples `u(theta_k)`.
    pub fn from_fn(grid: Grid, u: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n()).map(|k| u(grid.theta(k))).collect();
        Self { grid, values }
    }

    /// Samples of a real function.
    pub fn from_real_fn(grid: Grid, u: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |t| Complex64::new(u(t), 0.0))
    }

    /// Constant function.
    pub fn constant(grid: Grid, c: Complex64) -> Self {
        Self { grid, values: vec![c; grid.n()] }
    }

    /// Underlying grid.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Sample slice.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Consumes the function and returns its samples.
    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Real parts.
    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Pointwise moduli.
    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Largest imaginary part in modulus.
    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// True when every imaginary part is below [`REAL_TOL`].
    pub fn is_real(&self) -> bool {
        self.max_imag() < REAL_TOL
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination with another function on the same grid.
    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self { grid: self.grid, values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect() })
    }

    /// Grid mean of the samples.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.grid.n() as f64
    }
}

/// Fourier coefficients in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    /// Zero series.
    pub fn zeros(grid: Grid) -> Self {
        Self { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }

    /// Wraps FFT-ordered coefficients.
    pub fn from_coeffs(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(BepError::LengthMismatch { expected: grid.n(), got: coeffs.len() });
        }
        Ok(Self { grid, coeffs })
    }

    /// Series with the listed `(frequency, coefficient)` pairs.
    pub fn from_modes(grid: Grid, modes: &[(i64, Complex64)]) -> Self {
        let mut s = Self::zeros(grid);
        for &(m, c) in modes {
            s.coeffs[grid.slot(m)] += c;
        }
        s
    }

    /// Analytic polynomial `sum_k c_k z^k`.
    pub fn from_polynomial(grid: Grid, c: &[Complex64]) -> Result<Self> {
        if c.len() > grid.n() / 2 {
            return Err(BepError::InvalidParameter(format!(
                "degree {} exceeds grid capacity {}",
                c.len() - 1,
                grid.n() / 2 - 1
            )));
        }
        let mut s = Self::zeros(grid);
        s.coeffs[..c.len()].copy_from_slice(c);
        Ok(s)
    }

    /// Underlying grid.
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// FFT-ordered coefficient slice.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of frequency `m`; zero outside `[-n/2, n/2 - 1]`.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let h = (self.grid.n() / 2) as i64;
        if m < -h || m >= h {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[self.grid.slot(m)]
    }

    /// Sets the coefficient of frequency `m`.
    pub fn set_coeff(&mut self, m: i64, c: Complex64) {
        let slot = self.grid.slot(m);
        self.coeffs[slot] = c;
    }

    /// Coefficients of frequencies `0..=d`.
    pub fn analytic_coeffs(&self, d: usize) -> Vec<Complex64> {
        (0..=d as i64).map(|m| self.coeff(m)).collect()
    }

    /// `sqrt(sum |c_m|^2)`, the L2 norm on the circle.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest negative-frequency coefficient, returned as `(frequency, modulus)`.
    pub fn max_negative(&self) -> (i64, f64) {
        let mut best = (0, 0.0);
        for k in self.grid.n() / 2..self.grid.n() {
            let a = self.coeffs[k].norm();
            if a > best.1 {
                best = (self.grid.frequency(k), a);
            }
        }
        best
    }

    /// Checks that negative-frequency content is below `tol * (1 + ||s||)`.
    pub fn ensure_analytic(&self, tol: f64) -> Result<()> {
        let (index, modulus) = self.max_negative();
        if modulus > tol * (1.0 + self.norm_l2()) {
            return Err(BepError::NotAnalytic { index, modulus });
        }
        Ok(())
    }

    /// Zeroes every frequency outside `[-d, d]`.
    pub fn truncate(&self, d: usize) -> Self {
        let mut out = self.clone();
        for k in 0..self.grid.n() {
            if self.grid.frequency(k).unsigned_abs() as usize > d {
                out.coeffs[k] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Coefficientwise combination.
    pub fn zip_with(&self, other: &FourierSeries, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        Ok(Self { grid: self.grid, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect() })
    }

    /// Sum of two series.
    pub fn add(&self, other: &FourierSeries) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Difference of two series.
    pub fn sub(&self, other: &FourierSeries) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        Self { grid: self.grid, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// Hermitian inner product `sum a_m conj(b_m)` over the whole circle.
    pub fn dot(&self, other: &FourierSeries) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let plan = if inverse { p.plan_fft_inverse(buf.len()) } else { p.plan_fft_forward(buf.len()) };
        plan.process(buf);
    });
}

/// Discrete Fourier coefficients of `u`.
pub fn fft_analyze(u: &GridFunction) -> FourierSeries {
    let mut buf = u.values.clone();
    fft_in_place(&mut buf, false);
    let s = 1.0 / u.grid.n() as f64;
    buf.iter_mut().for_each(|c| *c *= s);
    FourierSeries { grid: u.grid, coeffs: buf }
}

/// Samples of the trigonometric sum `sum_m c_m e^{i m theta}` on the grid.
pub fn fft_synthesize(s: &FourierSeries) -> GridFunction {
    let mut buf = s.coeffs.clone();
    fft_in_place(&mut buf, true);
    GridFunction { grid: s.grid, values: buf }
}

/// Cauchy projection onto non-negative frequencies.
pub fn project_plus(s: &FourierSeries) -> FourierSeries {
    let mut out = s.clone();
    let n = s.grid.n();
    out.coeffs[n / 2..].iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    out
}

/// Complementary projection onto negative frequencies.
pub fn project_minus(s: &FourierSeries) -> FourierSeries {
    let mut out = s.clone();
    let n = s.grid.n();
    out.coeffs[..n / 2].iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
    out
}

/// Harmonic conjugate: Fourier multiplier `-i sign(m)`, Nyquist mode dropped.
pub fn conjugate_function(h: &GridFunction) -> Result<GridFunction> {
    let im = h.max_imag();
    if im >= REAL_TOL {
        return Err(BepError::NotReal(im));
    }
    let mut s = fft_analyze(&h.map(|v| Complex64::new(v.re, 0.0)));
    let n = h.grid.n();
    let minus_i = Complex64::new(0.0, -1.0);
    for k in 0..n {
        let m = h.grid.frequency(k);
        s.coeffs[k] = if m > 0 {
            s.coeffs[k] * minus_i
        } else if m < 0 && k != n / 2 {
            -s.coeffs[k] * minus_i
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    Ok(fft_synthesize(&s).map(|v| Complex64::new(v.re, 0.0)))
}

/// Arc quadrature of `(1/2 pi) int_E u conj(v) dtheta`.
pub fn inner_product(u: &GridFunction, v: &GridFunction, e: &ArcSet) -> Result<Complex64> {
    u.grid.check_same(&v.grid)?;
    let w = e.weights(u.grid)?;
    Ok(u.values.iter().zip(&v.values).zip(&w).filter(|(_, &w)| w > 0.0).map(|((a, b), &w)| a * b.conj() * w).sum())
}

/// Quadrature L2 norm over `E` (normalized measure).
pub fn norm_l2(u: &GridFunction, e: &ArcSet) -> Result<f64> {
    if e.is_empty() {
        return Err(BepError::EmptySet);
    }
    Ok(inner_product(u, u, e)?.re.max(0.0).sqrt())
}

/// Quadrature Lp norm over `E` for `p >= 1`.
pub fn norm_lp(u: &GridFunction, e: &ArcSet, p: f64) -> Result<f64> {
    if e.is_empty() {
        return Err(BepError::EmptySet);
    }
    if p < 1.0 || !p.is_finite() {
        return Err(BepError::InvalidParameter(format!("exponent {p} must be finite and >= 1")));
    }
    let w = e.weights(u.grid)?;
    let s: f64 = u.values.iter().zip(&w).map(|(v, w)| w * v.norm().powf(p)).sum();
    Ok(s.powf(1.0 / p))
}

/// Maximum of `|u|` over grid points of `E` (endpoints included).
pub fn norm_sup(u: &GridFunction, e: &ArcSet) -> Result<f64> {
    if e.is_empty() {
        return Err(BepError::EmptySet);
    }
    let w = e.weights(u.grid)?;
    Ok(u.values.iter().zip(&w).filter(|(_, &w)| w > 0.0).fold(0.0, |m, (v, _)| m.max(v.norm())))
}
