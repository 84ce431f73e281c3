//! Solver runs producing reports.

use anyhow::{anyhow, bail, Result};
use hardy_bep::bep_solver::{solve_bep, BepProblem, BepSolution};
use hardy_bep::carleman_recovery::{quenching_function, recover_sequence};
use hardy_bep::fourier_core::{fft_synthesize, FourierSeries, GridFunction};
use hardy_bep::poly_solver::{convergence_study_with, solve_fbep, PolyOptions, PolyProblem, PolySolution};
use num_complex::Complex64;

use crate::report::{
    ConvergenceEntry, CrossValidation, FloatEnv, PolyReport, Provenance, RecoveryReport, RecoveryRow, Scalars,
    SolutionReport,
};
use crate::spec::{BuiltProblem, Method, ProblemSpec};

/// `bep solve`: runs the method selected in the spec.
pub fn solve(spec: &ProblemSpec) -> Result<SolutionReport> {
    let built = spec.build()?;
    let method = spec.solver.method;
    let p = &built.problem;
    let mut poly_options = None;
    let mut report = match method {
        Method::DualAscent => {
            let sol = solve_bep(p)?;
            dual_report(p, &sol)
        }
        Method::Poly => {
            let (ps, series) = poly_solve(&built, spec.solver.degree, &spec.solver.poly)?;
            poly_options = Some(spec.solver.poly.clone());
            let samples = fft_synthesize(&series);
            let converged = ps.max_violation <= spec.solver.poly.exchange_tol;
            SolutionReport {
                g0: samples_rows(&samples),
                lambda: Vec::new(),
                scalars: Some(Scalars {
                    primal: p.primal_value(&samples),
                    dual: None,
                    gap: None,
                    saturation_residual: p.saturation(&samples),
                    critical_residual: None,
                    iterations: ps.rounds,
                    converged,
                    extendable: false,
                }),
                poly: Some(poly_report(&ps, &series, p)),
                ..empty_report()
            }
        }
        Method::Both => {
            let (ps, series) = poly_solve(&built, spec.solver.degree, &spec.solver.poly)?;
            poly_options = Some(spec.solver.poly.clone());
            let sol = solve_bep(p)?;
            let mut r = dual_report(p, &sol);
            let pr = poly_report(&ps, &series, p);
            r.cross_validation = Some(CrossValidation {
                degree: ps.degree,
                l2_diff_circle: series.sub(&sol.g0)?.norm_l2(),
                primal_diff: pr.primal - sol.primal,
            });
            if let Some(s) = r.scalars.as_mut() {
                s.converged &= ps.max_violation <= spec.solver.poly.exchange_tol;
            }
            r.poly = Some(pr);
            r
        }
    };
    report.provenance = provenance(spec, &built, "solve", method.name(), poly_options);
    Ok(report)
}

/// `bep poly`: dual ascent plus the polynomial convergence study.
pub fn poly_study(spec: &ProblemSpec, degrees: &[usize]) -> Result<SolutionReport> {
    if degrees.is_empty() {
        bail!("--degrees: at least one degree is required");
    }
    let built = spec.build()?;
    let p = &built.problem;
    let sol = solve_bep(p)?;
    let (unit, c) = unit_problem(&built)?;
    let mut unit_sol = sol.clone();
    unit_sol.g0 = sol.g0.scale(Complex64::new(1.0 / c, 0.0));
    let rows = convergence_study_with(&unit_sol, &unit, degrees, &spec.solver.poly)?;
    let mut report = dual_report(p, &sol);
    report.convergence = Some(
        rows.into_iter()
            .map(|r| ConvergenceEntry {
                degree: r.degree,
                l2_circle: r.l2_circle * c,
                l2_j: r.l2_j * c,
                primal: r.primal * c * c,
            })
            .collect(),
    );
    report.provenance = provenance(spec, &built, "poly", "dual_ascent+poly", Some(spec.solver.poly.clone()));
    Ok(report)
}

/// `bep recover`: Carleman sequence `f_1(z), ..., f_{n_max}(z)`.
pub fn recover(spec: &ProblemSpec, z: Complex64, n_max: usize, strength: f64) -> Result<SolutionReport> {
    let built = spec.build()?;
    let p = &built.problem;
    let phi = quenching_function(p.arcs_i(), strength, p.grid())?;
    let seq = recover_sequence(p.f(), &phi, z, n_max)?;
    let reference = built.builtin.and_then(|b| b.analytic(z));
    let rows = seq
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let error = match reference {
                Some(r) => (v - r).norm(),
                None if k == 0 => v.norm(),
                None => (v - seq[k - 1]).norm(),
            };
            RecoveryRow { n: k + 1, re: v.re, im: v.im, error }
        })
        .collect();
    let report = SolutionReport {
        recovery: Some(RecoveryReport {
            z: [z.re, z.im],
            strength,
            reference: reference.map(|r| [r.re, r.im]),
            error_kind: if reference.is_some() { "exact" } else { "successive" }.into(),
            rows,
        }),
        provenance: provenance(spec, &built, "recover", "carleman", None),
        ..empty_report()
    };
    Ok(report)
}

fn empty_report() -> SolutionReport {
    SolutionReport {
        g0: Vec::new(),
        lambda: Vec::new(),
        scalars: None,
        poly: None,
        convergence: None,
        cross_validation: None,
        recovery: None,
        provenance: Provenance {
            tool: String::new(),
            command: String::new(),
            grid_n: 0,
            solver: String::new(),
            data: String::new(),
            options: Default::default(),
            poly_options: None,
            snapped_arcs: Vec::new(),
            threads: 0,
            float_env: FloatEnv::current(),
        },
    }
}

fn samples_rows(g: &GridFunction) -> Vec<[f64; 3]> {
    let grid = g.grid();
    g.values().iter().enumerate().map(|(k, v)| [grid.theta(k), v.re, v.im]).collect()
}

fn dual_report(p: &BepProblem, sol: &BepSolution) -> SolutionReport {
    let grid = p.grid();
    let lam = sol.lambda.values();
    SolutionReport {
        g0: samples_rows(&sol.g0_boundary),
        lambda: p.j_indices().into_iter().map(|k| [grid.theta(k), lam[k].re]).collect(),
        scalars: Some(Scalars {
            primal: sol.primal,
            dual: Some(sol.dual),
            gap: Some(sol.gap),
            saturation_residual: sol.saturation_residual,
            critical_residual: Some(sol.critical_residual),
            iterations: sol.iterations,
            converged: sol.converged,
            extendable: sol.extendable,
        }),
        ..empty_report()
    }
}

/// The problem scaled to `M ≡ 1` and the scale `c`.
fn unit_problem(built: &BuiltProblem) -> Result<(BepProblem, f64)> {
    let c = built.constant_bound.ok_or_else(|| anyhow!("M: the polynomial solver needs a constant bound"))?;
    let p = &built.problem;
    if c == 1.0 {
        return Ok((p.clone(), 1.0));
    }
    let f = p.f().map(|v| v / c);
    Ok((BepProblem::with_unit_bound(p.arcs_i().clone(), f, p.options().clone())?, c))
}

/// Polynomial solution and its series in the original scale.
fn poly_solve(built: &BuiltProblem, degree: usize, options: &PolyOptions) -> Result<(PolySolution, FourierSeries)> {
    let (unit, c) = unit_problem(built)?;
    let pp = PolyProblem::new(unit.arcs_i().clone(), unit.f().clone(), degree)?.with_options(options.clone());
    let mut ps = solve_fbep(&pp)?;
    for v in ps.coeffs.iter_mut() {
        *v *= c;
    }
    ps.primal *= c * c;
    let series = ps.series(unit.grid())?;
    Ok((ps, series))
}

fn poly_report(ps: &PolySolution, series: &FourierSeries, p: &BepProblem) -> PolyReport {
    let samples = fft_synthesize(series);
    PolyReport {
        degree: ps.degree,
        coeffs: ps.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        active_points: ps.active_points.clone(),
        multipliers: ps.multipliers.clone(),
        primal: p.primal_value(&samples),
        stationarity_residual: ps.stationarity_residual,
        max_violation: ps.max_violation,
        rounds: ps.rounds,
        certificate_valid: ps.certificate_valid,
    }
}

fn provenance(
    spec: &ProblemSpec,
    built: &BuiltProblem,
    command: &str,
    solver: &str,
    poly_options: Option<PolyOptions>,
) -> Provenance {
    let p = &built.problem;
    Provenance {
        tool: format!("bep {}", env!("CARGO_PKG_VERSION")),
        command: command.into(),
        grid_n: p.grid().n(),
        solver: solver.into(),
        data: match &spec.f.builtin {
            Some(name) => format!("builtin:{name}"),
            None => "samples".into(),
        },
        options: p.options().clone(),
        poly_options,
        snapped_arcs: p.arcs_i().arcs().iter().map(|&(a, b)| [a, b]).collect(),
        threads: rayon::current_num_threads(),
        float_env: FloatEnv::current(),
    }
}
