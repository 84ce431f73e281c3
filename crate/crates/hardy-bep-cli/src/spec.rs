//! Problem specification files (JSON).

use std::f64::consts::TAU;

use anyhow::{anyhow, bail, Context, Result};
use hardy_bep::bep_solver::{BepProblem, SolverOptions};
use hardy_bep::fourier_core::{Grid, GridFunction};
use hardy_bep::hardy_functions::ArcSet;
use hardy_bep::poly_solver::PolyOptions;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Contents of a `spec.json` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// Grid size; overrides `solver.options.grid_n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    /// Arc-set `I` as `[a, b]` radian pairs.
    #[serde(rename = "arcs_I")]
    pub arcs_i: Vec<[f64; 2]>,
    /// Data on `I`.
    pub f: DataSpec,
    /// Bound on `J` (default `M ≡ 1`).
    #[serde(rename = "M", default)]
    pub m: BoundSpec,
    /// Solver selection and settings.
    #[serde(default)]
    pub solver: SolverSpec,
}

/// Data `f`: a builtin instance or samples `[theta, re, im]` on `I`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    /// One of `half_z`, `const2`, `conj_z`, `pole`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// Builtin parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Map<String, Value>>,
    /// Samples `[theta, re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 3]>>,
}

/// Bound `M`: a constant or samples `[theta, value]` on `J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    /// Constant bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Samples `[theta, value]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl Default for BoundSpec {
    fn default() -> Self {
        Self { constant: Some(1.0), samples: None }
    }
}

/// Which solver(s) to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Dual ascent.
    #[default]
    DualAscent,
    /// Polynomial approximant of degree `solver.degree`.
    Poly,
    /// Both, with a cross-validation block.
    Both,
}

impl Method {
    /// Name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            Self::DualAscent => "dual_ascent",
            Self::Poly => "poly",
            Self::Both => "both",
        }
    }
}

/// Solver section of the spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSpec {
    /// Method.
    pub method: Method,
    /// Dual-ascent options.
    pub options: SolverOptions,
    /// Polynomial solver options.
    pub poly: PolyOptions,
    /// Polynomial degree for `poly` and `both`.
    pub degree: usize,
    /// Degrees of `bep poly` when `--degrees` is not given.
    pub degrees: Vec<usize>,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            method: Method::default(),
            options: SolverOptions::default(),
            poly: PolyOptions::default(),
            degree: 32,
            degrees: vec![4, 8, 16, 32],
        }
    }
}

/// Builtin data with known analytic extension (where one exists).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    /// `0.5 e^{i theta}`.
    HalfZ,
    /// `f ≡ 2`.
    Const2,
    /// `e^{-i theta}`.
    ConjZ,
    /// `1/(z - a)` with `|a| > 1`.
    Pole(Complex64),
}

/// Names accepted in `f.builtin`.
pub const BUILTIN_NAMES: [&str; 4] = ["half_z", "const2", "conj_z", "pole"];

impl Builtin {
    /// Parses `f.builtin` and `f.params`.
    pub fn parse(name: &str, params: Option<&Map<String, Value>>) -> Result<Self> {
        let empty = Map::new();
        let params = params.unwrap_or(&empty);
        let allowed: &[&str] = if name == "pole" { &["pole"] } else { &[] };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            bail!("f.params.{k}: unknown parameter for builtin `{name}`");
        }
        Ok(match name {
            "half_z" => Self::HalfZ,
            "const2" => Self::Const2,
            "conj_z" => Self::ConjZ,
            "pole" => {
                let a = match params.get("pole") {
                    None => Complex64::new(2.0, 0.0),
                    Some(v) => {
                        let [re, im]: [f64; 2] = serde_json::from_value(v.clone())
                            .map_err(|e| anyhow!("f.params.pole: expected [re, im]: {e}"))?;
                        Complex64::new(re, im)
                    }
                };
                if !(a.norm() > 1.0 && a.re.is_finite() && a.im.is_finite()) {
                    bail!("f.params.pole: pole must lie outside the closed unit disk, got {a}");
                }
                Self::Pole(a)
            }
            _ => bail!("f.builtin: unknown builtin `{name}` (expected one of {})", BUILTIN_NAMES.join(", ")),
        })
    }

    /// Boundary value at angle `theta`.
    pub fn trace(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        match *self {
            Self::HalfZ => z * 0.5,
            Self::Const2 => Complex64::new(2.0, 0.0),
            Self::ConjZ => z.conj(),
            Self::Pole(a) => 1.0 / (z - a),
        }
    }

    /// Analytic extension into the disk, if `f` is the trace of an H² function.
    pub fn analytic(&self, z: Complex64) -> Option<Complex64> {
        match *self {
            Self::HalfZ => Some(z * 0.5),
            Self::Const2 => Some(Complex64::new(2.0, 0.0)),
            Self::ConjZ => None,
            Self::Pole(a) => Some(1.0 / (z - a)),
        }
    }
}

/// A spec turned into solver inputs.
#[derive(Debug, Clone)]
pub struct BuiltProblem {
    /// Dual-ascent problem (snapped arcs, data and bound on the grid).
    pub problem: BepProblem,
    /// Builtin data, if any.
    pub builtin: Option<Builtin>,
    /// Constant bound, if `M` is constant.
    pub constant_bound: Option<f64>,
}

impl ProblemSpec {
    /// Parses JSON; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                anyhow!("{}", e.inner())
            } else {
                anyhow!("{path}: {}", e.inner())
            }
        })
    }

    /// Reads and parses a spec file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("invalid spec {}", path.display()))
    }

    /// Solver options with the effective grid size.
    pub fn options(&self) -> Result<SolverOptions> {
        let mut opts = self.solver.options.clone();
        if let Some(n) = self.grid_n {
            let default_n = SolverOptions::default().grid_n;
            if opts.grid_n != n && opts.grid_n != default_n {
                bail!("solver.options.grid_n: {} conflicts with grid_n {n}", opts.grid_n);
            }
            opts.grid_n = n;
        }
        Grid::new(opts.grid_n).map_err(|e| anyhow!("grid_n: {e}"))?;
        opts.validate().map_err(|e| anyhow!("solver.options: {e}"))?;
        Ok(opts)
    }

    /// Validates the spec and samples data and bound on the grid.
    pub fn build(&self) -> Result<BuiltProblem> {
        let opts = self.options()?;
        let grid = Grid::new(opts.grid_n).map_err(|e| anyhow!("grid_n: {e}"))?;
        if self.arcs_i.is_empty() {
            bail!("arcs_I: at least one arc is required");
        }
        let pairs: Vec<(f64, f64)> = self.arcs_i.iter().map(|p| (p[0], p[1])).collect();
        let arcs = ArcSet::new(&pairs).and_then(|a| a.snapped(grid)).map_err(|e| anyhow!("arcs_I: {e}"))?;
        if arcs.is_empty() || arcs.is_full() {
            bail!("arcs_I: I and its complement must both have positive measure");
        }
        let w_i = arcs.weights(grid)?;
        let (f, builtin) = self.build_f(grid, &arcs, &w_i)?;
        let (m, constant_bound) = self.build_m(grid, &arcs, &w_i)?;
        let problem = BepProblem::new(arcs, f, m, opts)?;
        Ok(BuiltProblem { problem, builtin, constant_bound })
    }

    fn build_f(&self, grid: Grid, arcs: &ArcSet, w_i: &[f64]) -> Result<(GridFunction, Option<Builtin>)> {
        match (&self.f.builtin, &self.f.samples) {
            (Some(name), None) => {
                let b = Builtin::parse(name, self.f.params.as_ref())?;
                let v = (0..grid.n())
                    .map(|k| if w_i[k] > 0.0 { b.trace(grid.theta(k)) } else { Complex64::new(0.0, 0.0) })
                    .collect();
                Ok((GridFunction::new(grid, v)?, Some(b)))
            }
            (None, Some(samples)) => {
                if self.f.params.is_some() {
                    bail!("f.params: only allowed with f.builtin");
                }
                let mut pts = Vec::with_capacity(samples.len());
                for (j, s) in samples.iter().enumerate() {
                    check_angle(s[0], &format!("f.samples[{j}]"))?;
                    if !(s[1].is_finite() && s[2].is_finite()) {
                        bail!("f.samples[{j}]: value is not finite");
                    }
                    if !near(arcs, s[0], grid) {
                        bail!("f.samples[{j}]: angle {} is outside I", s[0]);
                    }
                    pts.push((s[0], Complex64::new(s[1], s[2])));
                }
                let table = PeriodicTable::new(pts).context("f.samples")?;
                let v = (0..grid.n())
                    .map(|k| if w_i[k] > 0.0 { table.eval(grid.theta(k)) } else { Complex64::new(0.0, 0.0) })
                    .collect();
                Ok((GridFunction::new(grid, v)?, None))
            }
            (Some(_), Some(_)) => bail!("f: give either `builtin` or `samples`, not both"),
            (None, None) => bail!("f: one of `builtin` or `samples` is required"),
        }
    }

    fn build_m(&self, grid: Grid, arcs: &ArcSet, w_i: &[f64]) -> Result<(GridFunction, Option<f64>)> {
        let one = Complex64::new(1.0, 0.0);
        match (self.m.constant, &self.m.samples) {
            (Some(c), None) => {
                if !(c > 0.0 && c.is_finite()) {
                    bail!("M.constant: must be positive and finite, got {c}");
                }
                Ok((GridFunction::constant(grid, Complex64::new(c, 0.0)), Some(c)))
            }
            (None, Some(samples)) => {
                let arcs_j = arcs.complement();
                let mut pts = Vec::with_capacity(samples.len());
                for (j, s) in samples.iter().enumerate() {
                    check_angle(s[0], &format!("M.samples[{j}]"))?;
                    if !(s[1] > 0.0 && s[1].is_finite()) {
                        bail!("M.samples[{j}]: bound must be positive and finite, got {}", s[1]);
                    }
                    if !near(&arcs_j, s[0], grid) {
                        bail!("M.samples[{j}]: angle {} is outside J", s[0]);
                    }
                    pts.push((s[0], Complex64::new(s[1], 0.0)));
                }
                let table = PeriodicTable::new(pts).context("M.samples")?;
                let v = (0..grid.n())
                    .map(|k| if w_i[k] < 1.0 / grid.n() as f64 { table.eval(grid.theta(k)) } else { one })
                    .collect();
                Ok((GridFunction::new(grid, v)?, None))
            }
            (Some(_), Some(_)) => bail!("M: give either `constant` or `samples`, not both"),
            (None, None) => bail!("M: one of `constant` or `samples` is required"),
        }
    }
}

fn check_angle(theta: f64, field: &str) -> Result<()> {
    if !(theta.is_finite() && (0.0..TAU).contains(&theta)) {
        bail!("{field}: angle {theta} is not in [0, 2 pi)");
    }
    Ok(())
}

/// In the set or within one grid step of its boundary.
fn near(arcs: &ArcSet, theta: f64, grid: Grid) -> bool {
    arcs.contains(theta) || arcs.distance_to_boundary(theta) <= grid.step()
}

/// Piecewise-linear periodic interpolation of scattered samples in `theta`.
#[derive(Debug, Clone)]
pub struct PeriodicTable {
    pts: Vec<(f64, Complex64)>,
}

impl PeriodicTable {
    /// Sorts samples by angle; angles must be distinct.
    pub fn new(mut pts: Vec<(f64, Complex64)>) -> Result<Self> {
        if pts.is_empty() {
            bail!("at least one sample is required");
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = pts.windows(2).find(|w| w[0].0 == w[1].0) {
            bail!("duplicate sample angle {}", w[0].0);
        }
        Ok(Self { pts })
    }

    /// Interpolated value at `theta`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let p = &self.pts;
        if p.len() == 1 {
            return p[0].1;
        }
        let theta = theta.rem_euclid(TAU);
        let i = p.partition_point(|s| s.0 <= theta);
        let (lo, hi) = if i == 0 || i == p.len() {
            let (a, b) = (p[p.len() - 1], p[0]);
            let lo = (a.0 - if i == 0 { TAU } else { 0.0 }, a.1);
            let hi = (b.0 + if i == 0 { 0.0 } else { TAU }, b.1);
            (lo, hi)
        } else {
            (p[i - 1], p[i])
        };
        let t = (theta - lo.0) / (hi.0 - lo.0);
        lo.1 * (1.0 - t) + hi.1 * t
    }
}
