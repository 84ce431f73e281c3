//! Command-line front end for the `hardy-bep` solvers.
//!
//! * `bep solve <spec.json> -o <report.json>`
//! * `bep poly <spec.json> --degrees 4,8,16,32`
//! * `bep recover <spec.json> --z "0.0+0.0i" --nmax 200 --strength 1.0`
//! * `bep export <report.json> --kind lambda`
//! * `bep ingest-hp <data.csv> --band w1,w2 -o spec.json`
//!
//! Exit codes: `0` success, `2` solver did not converge (report still
//! written), `1` input or runtime error. `BEP_THREADS` sets the number of
//! worker threads.

pub mod commands;
pub mod export;
pub mod halfplane;
pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use num_complex::Complex64;

pub use commands::{poly_study, recover, solve};
pub use export::{export_csv, ExportKind};
pub use halfplane::ingest_halfplane;
pub use report::SolutionReport;
pub use spec::ProblemSpec;

/// Exit code on success.
pub const EXIT_OK: i32 = 0;
/// Exit code on input or runtime errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit code when a solver did not converge.
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "BEP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "bep", version, about = "Bounded extremal problems in the Hardy space H2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a problem spec and write a report.
    Solve {
        spec: PathBuf,
        /// Report path (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dual ascent plus polynomial approximants of several degrees.
    Poly {
        spec: PathBuf,
        /// Comma-separated degrees (default: solver.degrees of the spec).
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Carleman recovery of the analytic extension at one point.
    Recover {
        spec: PathBuf,
        /// Point of the disk, e.g. "0.2-0.1i".
        #[arg(long, default_value = "0.0+0.0i", allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 200)]
        nmax: usize,
        #[arg(long, default_value_t = 1.0)]
        strength: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Plot data from a report as CSV.
    Export {
        report: PathBuf,
        /// boundary_modulus, lambda, convergence or recovery.
        #[arg(long)]
        kind: ExportKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Map half-plane frequency data (omega, re, im) to a spec.
    IngestHp {
        data: PathBuf,
        /// Frequency band "w1,w2" whose image is I.
        #[arg(long, allow_hyphen_values = true)]
        band: String,
        #[arg(long, default_value_t = 4096)]
        grid_n: usize,
        /// Constant bound M on J.
        #[arg(long, default_value_t = 1.0)]
        bound: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Thread count requested through `BEP_THREADS`.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => bail!("{THREADS_ENV}: {e}"),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("{THREADS_ENV}: expected a positive integer, got `{s}`"),
        },
    }
}

/// Runs the CLI with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let outcome = threads_from_env().and_then(|threads| match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building thread pool")?
            .install(|| execute(cli.command)),
        None => execute(cli.command),
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Solve { spec, output } => {
            let report = solve(&ProblemSpec::load(&spec)?)?;
            write_report(&report, output.as_deref())
        }
        Command::Poly { spec, degrees, output } => {
            let spec = ProblemSpec::load(&spec)?;
            let degrees = degrees.unwrap_or_else(|| spec.solver.degrees.clone());
            let report = poly_study(&spec, &degrees)?;
            write_report(&report, output.as_deref())
        }
        Command::Recover { spec, z, nmax, strength, output } => {
            let z = parse_complex(&z).context("--z")?;
            let report = recover(&ProblemSpec::load(&spec)?, z, nmax, strength)?;
            write_report(&report, output.as_deref())
        }
        Command::Export { report, kind, output } => {
            let csv = export_csv(&SolutionReport::load(&report)?, kind)?;
            write_text(&csv, output.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::IngestHp { data, band, grid_n, bound, output } => {
            let file = std::fs::File::open(&data).with_context(|| format!("reading {}", data.display()))?;
            let rows = halfplane::read_csv(file).with_context(|| format!("invalid data {}", data.display()))?;
            let out = ingest_halfplane(&rows, parse_band(&band)?, grid_n, bound)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let mut text = serde_json::to_string_pretty(&out.spec)?;
            text.push('\n');
            write_text(&text, output.as_deref())?;
            Ok(EXIT_OK)
        }
    }
}

fn write_report(report: &SolutionReport, path: Option<&Path>) -> Result<i32> {
    write_text(&report.to_json(), path)?;
    Ok(if report.converged() { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Parses `a+bi`, `a-bi`, `a` or `bi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let z: Complex64 = t.parse().map_err(|_| anyhow!("cannot parse `{s}` as a complex number"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        bail!("`{s}` is not finite");
    }
    Ok(z)
}

fn parse_band(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => {
            let a = a.parse().with_context(|| format!("--band: cannot parse `{a}`"))?;
            let b = b.parse().with_context(|| format!("--band: cannot parse `{b}`"))?;
            Ok((a, b))
        }
        _ => bail!("--band: expected `w1,w2`, got `{s}`"),
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.0+0.0i").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_complex("0.2-0.1i").unwrap(), Complex64::new(0.2, -0.1));
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.3i").unwrap(), Complex64::new(0.0, 0.3));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn band_parsing() {
        assert_eq!(parse_band("-1.5, 2").unwrap(), (-1.5, 2.0));
        assert!(parse_band("1").is_err());
        assert!(parse_band("a,b").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["bep"]), EXIT_ERROR);
        assert_eq!(run(["bep", "export", "x.json", "--kind", "nope"]), EXIT_ERROR);
        assert_eq!(run(["bep", "--help"]), EXIT_OK);
    }
}
