//! Plot data as CSV.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};

use crate::report::SolutionReport;

/// Export kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportKind {
    /// `theta, |g0|` on the whole grid.
    BoundaryModulus,
    /// `theta, lambda` on the `J` grid points.
    Lambda,
    /// `n, ||k_n - g0||_{L²(T)}` per degree.
    Convergence,
    /// `n, error` of the Carleman sequence.
    Recovery,
}

/// Names accepted by `--kind`.
pub const KINDS: [&str; 4] = ["boundary_modulus", "lambda", "convergence", "recovery"];

impl FromStr for ExportKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "boundary_modulus" => Ok(Self::BoundaryModulus),
            "lambda" => Ok(Self::Lambda),
            "convergence" => Ok(Self::Convergence),
            "recovery" => Ok(Self::Recovery),
            _ => Err(format!("unknown kind `{s}` (valid kinds: {})", KINDS.join(", "))),
        }
    }
}

impl fmt::Display for ExportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Self::BoundaryModulus => 0,
            Self::Lambda => 1,
            Self::Convergence => 2,
            Self::Recovery => 3,
        };
        f.write_str(KINDS[i])
    }
}

/// CSV text with a header row, ordered by the first column.
pub fn export_csv(report: &SolutionReport, kind: ExportKind) -> Result<String> {
    let (header, mut rows): ([&str; 2], Vec<(f64, f64)>) = match kind {
        ExportKind::BoundaryModulus => {
            if report.g0.is_empty() {
                bail!("report has no boundary samples");
            }
            (["theta", "value"], report.g0.iter().map(|r| (r[0], r[1].hypot(r[2]))).collect())
        }
        ExportKind::Lambda => {
            if report.lambda.is_empty() {
                bail!("report has no multiplier samples (dual ascent was not run)");
            }
            (["theta", "value"], report.lambda.iter().map(|r| (r[0], r[1])).collect())
        }
        ExportKind::Convergence => match &report.convergence {
            Some(c) => (["n", "error"], c.iter().map(|r| (r.degree as f64, r.l2_circle)).collect()),
            None => bail!("report has no convergence study (run `bep poly`)"),
        },
        ExportKind::Recovery => match &report.recovery {
            Some(r) => (["n", "error"], r.rows.iter().map(|r| (r.n as f64, r.error)).collect()),
            None => bail!("report has no recovery sequence (run `bep recover`)"),
        },
    };
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let integer_key = header[0] == "n";
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for (x, y) in rows {
        let key = if integer_key { format!("{}", x as u64) } else { format!("{x}") };
        w.write_record([key, format!("{y}")])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
