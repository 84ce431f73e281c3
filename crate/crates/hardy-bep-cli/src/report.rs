//! Solution reports (JSON).

use anyhow::{Context, Result};
use hardy_bep::bep_solver::SolverOptions;
use hardy_bep::poly_solver::PolyOptions;
use serde::{Deserialize, Serialize};

/// Contents of a `report.json` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    /// Boundary samples `[theta, re, im]` of the solution on the whole grid.
    pub g0: Vec<[f64; 3]>,
    /// Multiplier samples `[theta, value]` on the `J` grid points.
    pub lambda: Vec<[f64; 2]>,
    /// Summary of the solve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalars: Option<Scalars>,
    /// Polynomial solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<PolyReport>,
    /// Polynomial convergence study.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<Vec<ConvergenceEntry>>,
    /// Dual ascent vs polynomial comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_validation: Option<CrossValidation>,
    /// Carleman recovery sequence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recovery: Option<RecoveryReport>,
    /// How the report was produced.
    pub provenance: Provenance,
}

/// Scalar diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scalars {
    /// `||f - g0||²_{L²(I)}`.
    pub primal: f64,
    /// Dual value (dual ascent only).
    pub dual: Option<f64>,
    /// `primal - dual`.
    pub gap: Option<f64>,
    /// `max ||g0| - M|` on interior `J`.
    pub saturation_residual: f64,
    /// Critical-point residual (dual ascent only).
    pub critical_residual: Option<f64>,
    /// Ascent iterations or exchange rounds.
    pub iterations: usize,
    /// All stopping criteria met.
    pub converged: bool,
    /// `f` extends within the bound.
    pub extendable: bool,
}

/// Polynomial solution summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyReport {
    /// Degree.
    pub degree: usize,
    /// Coefficients `[re, im]` of `z^0..z^n`.
    pub coeffs: Vec<[f64; 2]>,
    /// Certificate points (radians).
    pub active_points: Vec<f64>,
    /// Certificate multipliers of the problem normalized to `M = 1`.
    pub multipliers: Vec<f64>,
    /// `||f - k_n||²_{L²(I)}`.
    pub primal: f64,
    /// Stationarity residual of the certificate.
    pub stationarity_residual: f64,
    /// `max_J |k_n|/M - 1`.
    pub max_violation: f64,
    /// Exchange rounds.
    pub rounds: usize,
    /// Certificate passes its checks.
    pub certificate_valid: bool,
}

/// One degree of the convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEntry {
    /// Degree `n`.
    pub degree: usize,
    /// `||k_n - g0||_{L²(T)}`.
    pub l2_circle: f64,
    /// `||k_n - g0||_{L²(J)}`.
    pub l2_j: f64,
    /// `||f - k_n||²_{L²(I)}`.
    pub primal: f64,
}

/// Comparison of the two solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidation {
    /// Polynomial degree.
    pub degree: usize,
    /// `||k_n - g0||_{L²(T)}`.
    pub l2_diff_circle: f64,
    /// `primal(k_n) - primal(g0)`.
    pub primal_diff: f64,
}

/// Carleman recovery at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    /// Evaluation point `[re, im]`.
    pub z: [f64; 2],
    /// Quenching strength.
    pub strength: f64,
    /// Exact value `[re, im]` when known.
    pub reference: Option<[f64; 2]>,
    /// `exact` (distance to the reference) or `successive` (`|f_n - f_{n-1}|`, `|f_1|` for `n = 1`).
    pub error_kind: String,
    /// One row per `n`.
    pub rows: Vec<RecoveryRow>,
}

/// `f_n(z)` and its error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryRow {
    /// Index `n`.
    pub n: usize,
    /// `Re f_n(z)`.
    pub re: f64,
    /// `Im f_n(z)`.
    pub im: f64,
    /// See [`RecoveryReport::error_kind`].
    pub error: f64,
}

/// Inputs and environment of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Program name and version.
    pub tool: String,
    /// Command that wrote the report.
    pub command: String,
    /// Grid size.
    pub grid_n: usize,
    /// Solver method.
    pub solver: String,
    /// Data source (`builtin:<name>` or `samples`).
    pub data: String,
    /// Dual-ascent options.
    pub options: SolverOptions,
    /// Polynomial options, when a polynomial solve ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly_options: Option<PolyOptions>,
    /// Arc-set `I` after snapping to the grid.
    pub snapped_arcs: Vec<[f64; 2]>,
    /// Worker threads.
    pub threads: usize,
    /// Floating-point environment.
    pub float_env: FloatEnv,
}

/// Target facts that affect floating-point results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatEnv {
    /// Target architecture.
    pub arch: String,
    /// Target OS.
    pub os: String,
    /// Fused multiply-add enabled at compile time.
    pub fma: bool,
    /// Vector extensions enabled at compile time.
    pub simd: String,
    /// IEEE 754 binary64 with round-to-nearest-even.
    pub format: String,
}

impl FloatEnv {
    /// Environment of this build.
    pub fn current() -> Self {
        let simd = if cfg!(target_feature = "avx2") {
            "avx2"
        } else if cfg!(target_feature = "sse2") {
            "sse2"
        } else if cfg!(target_feature = "neon") {
            "neon"
        } else {
            "none"
        };
        Self {
            arch: std::env::consts::ARCH.into(),
            os: std::env::consts::OS.into(),
            fma: cfg!(target_feature = "fma"),
            simd: simd.into(),
            format: "binary64, round-to-nearest-even".into(),
        }
    }
}

impl SolutionReport {
    /// `true` when every solve in the report converged.
    pub fn converged(&self) -> bool {
        self.scalars.as_ref().map_or(true, |s| s.converged)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Reads a report file.
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("invalid report {}", path.display()))
    }
}
