//! Frequency-response data on the imaginary axis mapped to the unit circle.
//!
//! `w = i omega` goes to `z = (w - 1)/(w + 1) = e^{i theta}` with
//! `theta = pi - 2 atan(omega)`, and values are multiplied by `1/(1 + w)`.

use std::f64::consts::PI;
use std::io::Read;

use anyhow::{bail, Context, Result};
use hardy_bep::fourier_core::Grid;
use hardy_bep::hardy_functions::ArcSet;
use num_complex::Complex64;

use crate::spec::{BoundSpec, DataSpec, ProblemSpec, SolverSpec};

/// Fewest samples accepted by [`ingest_halfplane`].
pub const MIN_SAMPLES: usize = 8;

/// Circle angle of the boundary point `i omega`.
pub fn omega_to_theta(omega: f64) -> f64 {
    PI - 2.0 * omega.atan()
}

/// Inverse of [`omega_to_theta`] on `(0, 2 pi)`.
pub fn theta_to_omega(theta: f64) -> f64 {
    ((PI - theta) / 2.0).tan()
}

/// Disk point of the half-plane point `w`.
pub fn moebius(w: Complex64) -> Complex64 {
    (w - 1.0) / (w + 1.0)
}

/// Isometry weight `1/(1 + w)`.
pub fn weight(w: Complex64) -> Complex64 {
    1.0 / (1.0 + w)
}

/// Mapped data and any warnings raised on the way.
#[derive(Debug, Clone)]
pub struct Ingested {
    /// Spec with `I` the image of the band and `f` sampled on its grid points.
    pub spec: ProblemSpec,
    /// Non-fatal notes (e.g. reordered input).
    pub warnings: Vec<String>,
}

/// Maps samples `(omega, re, im)` to a spec on a grid of `grid_n` points.
pub fn ingest_halfplane(rows: &[(f64, f64, f64)], band: (f64, f64), grid_n: usize, bound: f64) -> Result<Ingested> {
    let mut warnings = Vec::new();
    if rows.len() < MIN_SAMPLES {
        bail!("need at least {MIN_SAMPLES} samples, got {}", rows.len());
    }
    if let Some((i, _)) =
        rows.iter().enumerate().find(|(_, r)| !(r.0.is_finite() && r.1.is_finite() && r.2.is_finite()))
    {
        bail!("row {}: non-finite value", i + 1);
    }
    let (w1, w2) = band;
    if !(w1.is_finite() && w2.is_finite() && w1 < w2) {
        bail!("--band: expected finite w1 < w2, got {w1},{w2}");
    }
    let mut rows = rows.to_vec();
    if rows.windows(2).any(|w| w[1].0 <= w[0].0) {
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        warnings.push("omega values were not increasing; samples sorted".into());
    }
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        bail!("duplicate omega {}", w[0].0);
    }
    if w1 < rows[0].0 || w2 > rows[rows.len() - 1].0 {
        bail!("--band: [{w1}, {w2}] is not inside the sampled range [{}, {}]", rows[0].0, rows[rows.len() - 1].0);
    }
    let grid = Grid::new(grid_n).context("--grid-n")?;
    let arcs =
        ArcSet::new(&[(omega_to_theta(w2), omega_to_theta(w1))]).and_then(|a| a.snapped(grid)).context("--band")?;
    if arcs.is_empty() || arcs.is_full() {
        bail!("--band: image arc must be a proper subset of the circle");
    }
    // ascending theta
    let mapped: Vec<(f64, Complex64)> = rows
        .iter()
        .rev()
        .map(|&(om, re, im)| {
            let w = Complex64::new(0.0, om);
            (omega_to_theta(om), Complex64::new(re, im) * weight(w))
        })
        .collect();
    let w_i = arcs.weights(grid)?;
    let samples = (0..grid.n())
        .filter(|&k| w_i[k] > 0.0)
        .map(|k| {
            let t = grid.theta(k);
            let v = interpolate_clamped(&mapped, t);
            [t, v.re, v.im]
        })
        .collect();
    let spec = ProblemSpec {
        grid_n: Some(grid_n),
        arcs_i: arcs.arcs().iter().map(|&(a, b)| [a, b]).collect(),
        f: DataSpec { samples: Some(samples), ..Default::default() },
        m: BoundSpec { constant: Some(bound), samples: None },
        solver: SolverSpec::default(),
    };
    Ok(Ingested { spec, warnings })
}

fn interpolate_clamped(pts: &[(f64, Complex64)], t: f64) -> Complex64 {
    let i = pts.partition_point(|p| p.0 <= t);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (a, b) = (pts[i - 1], pts[i]);
    let s = (t - a.0) / (b.0 - a.0);
    a.1 * (1.0 - s) + b.1 * s
}

/// Reads `omega,re,im` rows; a non-numeric first row is taken as a header.
pub fn read_csv(reader: impl Read) -> Result<Vec<(f64, f64, f64)>> {
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("row {}", i + 1))?;
        if rec.len() != 3 {
            bail!("row {}: expected 3 columns (omega, re, im), got {}", i + 1, rec.len());
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => out.push((v[0], v[1], v[2])),
            Err(_) if i == 0 => continue,
            Err(e) => bail!("row {}: {e}", i + 1),
        }
    }
    Ok(out)
}
