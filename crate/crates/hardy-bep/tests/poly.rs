use std::f64::consts::PI;

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use hardy_bep::prelude::*;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn data(f: impl Fn(f64) -> Complex64) -> GridFunction {
    GridFunction::from_fn(Grid::new(4096).unwrap(), f)
}

fn csc(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> CscMatrix<f64> {
    let (mut ri, mut ci, mut v) = (Vec::new(), Vec::new(), Vec::new());
    for col in 0..cols {
        for row in 0..rows {
            let x = f(row, col);
            if x != 0.0 {
                ri.push(row);
                ci.push(col);
                v.push(x);
            }
        }
    }
    CscMatrix::new_from_triplets(rows, cols, ri, ci, v)
}

/// `(1/2pi) int_0^pi e^{iq t} dt`.
fn half_moment(q: i64) -> Complex64 {
    if q == 0 {
        return c(0.5, 0.0);
    }
    let qf = q as f64;
    (Complex64::from_polar(1.0, qf * PI) - 1.0) / c(0.0, 2.0 * PI * qf)
}

/// Independent SOCP oracle: f = 2 on the upper half-circle, `|p(x_j)| <= 1` at the given points.
fn socp_oracle(d: usize, pts: &[f64]) -> f64 {
    let r = d + 1;
    let h = |i: usize, j: usize| {
        let a = half_moment((j % r) as i64 - (i % r) as i64);
        match (i < r, j < r) {
            (true, true) | (false, false) => a.re,
            (true, false) => -a.im,
            (false, true) => a.im,
        }
    };
    let p = csc(2 * r, 2 * r, |i, j| 2.0 * h(i, j)).to_triu();
    // <f, e_m>_I by the trapezoid rule on the 4096-point grid, as seen by the solver
    let n = 4096;
    let moment = |m: i64| -> Complex64 {
        (0..=n / 2)
            .map(|k| {
                let w = if k == 0 || k == n / 2 { 0.5 } else { 1.0 } / n as f64;
                Complex64::from_polar(2.0 * w, -(m as f64) * 2.0 * PI * k as f64 / n as f64)
            })
            .sum()
    };
    let q: Vec<f64> = (0..2 * r)
        .map(|i| {
            let m = moment((i % r) as i64);
            -2.0 * if i < r { m.re } else { m.im }
        })
        .collect();
    let a = csc(3 * pts.len(), 2 * r, |row, col| {
        let (kx, part) = ((col % r) as f64 * pts[row / 3], row % 3);
        match (part, col < r) {
            (0, _) => 0.0,
            (1, true) => -kx.cos(),
            (1, false) => kx.sin(),
            (2, true) => -kx.sin(),
            _ => -kx.cos(),
        }
    });
    let b: Vec<f64> = (0..3 * pts.len()).map(|row| if row % 3 == 0 { 1.0 } else { 0.0 }).collect();
    let cones = vec![SupportedConeT::SecondOrderConeT(3); pts.len()];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .tol_gap_abs(1e-11)
        .tol_gap_rel(1e-11)
        .tol_feas(1e-11)
        .build()
        .unwrap();
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings).unwrap();
    solver.solve();
    assert!(matches!(solver.solution.status, SolverStatus::Solved | SolverStatus::AlmostSolved));
    solver.solution.obj_val + 2.0
}

fn closed_samples(m: usize) -> Vec<f64> {
    (0..m).map(|i| PI + PI * i as f64 / (m - 1) as f64).collect()
}

#[test]
fn degree_zero_hand_case() {
    let p = PolyProblem::new(ArcSet::upper_half(), data(|_| c(2.0, 0.0)), 0).unwrap();
    let s = solve_fbep(&p).unwrap();
    assert!((s.coeffs[0] - 1.0).norm() < 1e-8);
    assert!((s.multipliers.iter().sum::<f64>() - 0.5).abs() < 1e-8);
    assert!((s.primal - 0.5).abs() < 1e-8);
}

#[test]
fn unconstrained_optimum_is_returned() {
    let p = PolyProblem::new(ArcSet::upper_half(), data(|t| Complex64::from_polar(0.5, t)), 3).unwrap();
    let s = solve_fbep(&p).unwrap();
    assert!(s.primal < 1e-10);
    assert!((s.coeffs[1] - 0.5).norm() < 1e-5);
    assert!(s.active_points.is_empty());
    assert!(s.certificate_valid);
}

#[test]
fn matches_dense_sampling_oracle() {
    let p = PolyProblem::new(ArcSet::upper_half(), data(|_| c(2.0, 0.0)), 8).unwrap();
    let s = solve_fbep(&p).unwrap();
    let coarse = socp_oracle(8, &closed_samples(512));
    assert!(coarse <= s.primal + 1e-9 && s.primal <= coarse + 1e-5, "{coarse} {}", s.primal);
    let fine = socp_oracle(8, &closed_samples(4096));
    assert!((fine - s.primal).abs() < 1e-6, "{fine} {}", s.primal);
}

#[test]
fn fixed_point_set_matches_oracle_on_same_points() {
    let pts = closed_samples(512);
    let opts = PolyOptions { exchange_tol: f64::INFINITY, ..PolyOptions::default() };
    let p = PolyProblem::new(ArcSet::upper_half(), data(|_| c(2.0, 0.0)), 8)
        .unwrap()
        .with_constraint_points(pts.clone())
        .unwrap()
        .with_options(opts);
    let s = solve_fbep(&p).unwrap();
    assert_eq!(s.rounds, 1);
    let o = socp_oracle(8, &pts);
    assert!((o - s.primal).abs() < 1e-9, "{o} {}", s.primal);
}

#[test]
fn solutions_are_feasible_on_a_finer_grid() {
    for d in [4usize, 8, 16] {
        let p = PolyProblem::new(ArcSet::upper_half(), data(|_| c(2.0, 0.0)), d).unwrap();
        let s = solve_fbep(&p).unwrap();
        let m = 8 * 16 * d;
        let worst = (0..=m).map(|i| s.eval(PI + PI * i as f64 / m as f64).norm()).fold(0.0, f64::max);
        assert!(worst <= 1.0 + 1e-6, "degree {d}: {worst}");
    }
}

#[test]
fn primal_decreases_with_degree() {
    let f = data(|t| c(1.0, 0.5) + Complex64::from_polar(0.8, -2.0 * t));
    let mut last = f64::INFINITY;
    for d in [1usize, 2, 4, 8] {
        let s = solve_fbep(&PolyProblem::new(ArcSet::upper_half(), f.clone(), d).unwrap()).unwrap();
        assert!(s.primal <= last + 1e-9);
        last = s.primal;
    }
}

#[test]
fn certificate_satisfies_bounds() {
    let arcs = ArcSet::new(&[(0.2, 1.4), (2.5, 4.0)]).unwrap();
    let f = data(|t| c(1.5 + t.cos(), 0.3));
    for d in [2usize, 6] {
        let p = PolyProblem::new(arcs.clone(), f.clone(), d).unwrap();
        let s = solve_fbep(&p).unwrap();
        let cert = kkt_certificate(&s, &p).unwrap();
        assert!(cert.valid);
        assert!(cert.points.len() <= 2 * (d + 1));
        assert!(cert.multipliers.iter().all(|&l| l >= -1e-6));
        assert!(cert.multiplier_sum <= 2.0 * p.f_norm_sq().unwrap() + 1e-6);
        assert!(cert.residual < 1e-5, "degree {d}: {}", cert.residual);
        assert!(cert.points.iter().all(|&x| p.arcs_j().contains(x)));
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let f = data(|_| c(1.0, 0.0));
    assert!(PolyProblem::new(ArcSet::full(), f.clone(), 2).is_err());
    assert!(PolyProblem::new(ArcSet::upper_half(), f.clone(), 5000).is_err());
    let p = PolyProblem::new(ArcSet::upper_half(), f, 2).unwrap();
    assert!(p.clone().with_constraint_points(vec![4.0; 5]).is_err());
    assert!(p.with_constraint_points(vec![1.0; 12]).is_err());
}
