use hardy_bep::hardy_functions::outer_from_log_modulus;
use hardy_bep::prelude::*;
use num_complex::Complex64;
use proptest::prelude::*;

const N: usize = 128;

fn grid() -> Grid {
    Grid::new(N).unwrap()
}

fn series(coeffs: &[(f64, f64)]) -> FourierSeries {
    FourierSeries::from_coeffs(grid(), coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

fn trig(cos: &[f64], sin: &[f64]) -> GridFunction {
    GridFunction::from_real_fn(grid(), |t| {
        cos.iter().enumerate().map(|(k, a)| a * (k as f64 * t).cos()).sum::<f64>()
            + sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * t).sin()).sum::<f64>()
    })
}

fn max_diff(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projections_split_identity(c in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), N)) {
        let s = series(&c);
        let sum = project_plus(&s).add(&project_minus(&s)).unwrap();
        prop_assert!(sum.sub(&s).unwrap().norm_l2() < 1e-15);
        let pp = project_plus(&project_plus(&s));
        prop_assert!(pp.sub(&project_plus(&s)).unwrap().norm_l2() == 0.0);
        prop_assert!(project_plus(&s).norm_l2() <= s.norm_l2());
        prop_assert!(project_minus(&s).norm_l2() <= s.norm_l2());
        prop_assert!(project_plus(&s).dot(&project_minus(&s)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn analysis_synthesis_round_trip(c in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), N)) {
        let s = series(&c);
        let back = fft_analyze(&fft_synthesize(&s));
        prop_assert!(back.sub(&s).unwrap().norm_l2() < 1e-14);
    }

    #[test]
    fn conjugation_parseval(cos in prop::collection::vec(-1.0..1.0f64, 1..20), sin in prop::collection::vec(-1.0..1.0f64, 0..20)) {
        let h = trig(&cos, &sin);
        let ht = conjugate_function(&h).unwrap();
        let full = ArcSet::full();
        let mean = h.mean().re;
        let lhs = norm_l2(&ht, &full).unwrap().powi(2);
        let rhs = norm_l2(&h, &full).unwrap().powi(2) - mean * mean;
        prop_assert!((lhs - rhs).abs() < 1e-12);
        prop_assert!(ht.mean().norm() < 1e-14);
        // h + i h~ is analytic
        let analytic = h.zip_with(&ht, |a, b| a + Complex64::i() * b).unwrap();
        prop_assert!(project_minus(&fft_analyze(&analytic)).norm_l2() < 1e-13);
    }

    #[test]
    fn conjugation_maps_cos_to_sin(k in 1usize..60) {
        let h = GridFunction::from_real_fn(grid(), |t| (k as f64 * t).cos());
        let expected = GridFunction::from_real_fn(grid(), |t| (k as f64 * t).sin());
        prop_assert!(max_diff(&conjugate_function(&h).unwrap(), &expected) < 1e-12);
    }

    #[test]
    fn outer_functions_multiply(a in prop::collection::vec(-0.5..0.5f64, 1..6), b in prop::collection::vec(-0.5..0.5f64, 1..6)) {
        let la = trig(&a, &[]);
        let lb = trig(&[], &b);
        let sum = la.zip_with(&lb, |x, y| x + y).unwrap();
        let wa = outer_from_log_modulus(&la).unwrap();
        let wb = outer_from_log_modulus(&lb).unwrap();
        let wab = outer_from_log_modulus(&sum).unwrap();
        let prod = wa.boundary().zip_with(wb.boundary(), |x, y| x * y).unwrap();
        prop_assert!(max_diff(&prod, wab.boundary()) < 1e-12);
        for (w, l) in wab.boundary().values().iter().zip(sum.values()) {
            prop_assert!((w.norm().ln() - l.re).abs() < 1e-12);
        }
    }

    #[test]
    fn blaschke_factors_preserve_modulus(
        zeros in prop::collection::vec((0.0..0.9f64, 0.0..std::f64::consts::TAU), 0..4),
        c in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8),
    ) {
        let zs: Vec<Complex64> = zeros.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        let b = BlaschkeProduct::new(&zs, Complex64::new(1.0, 0.0), 1).unwrap();
        let bb = b.boundary(grid()).unwrap();
        let g = fft_synthesize(&FourierSeries::from_polynomial(grid(), &c.iter().map(|&(x, y)| Complex64::new(x, y)).collect::<Vec<_>>()).unwrap());
        for (x, y) in bb.values().iter().zip(g.values()) {
            prop_assert!(((x * y).norm() - y.norm()).abs() < 1e-12);
        }
        for z in &zs {
            prop_assert!(blaschke_eval(&b, *z).unwrap().norm() < 1e-12);
        }
    }
}

#[test]
fn outer_round_trip_smooth_modulus() {
    let g = Grid::new(4096).unwrap();
    let rho = GridFunction::from_real_fn(g, |t| 2.0 + t.sin() + 0.3 * (3.0 * t).cos());
    let w = outer_from_modulus(&rho).unwrap();
    for (a, b) in w.boundary().values().iter().zip(rho.values()) {
        assert!((a.norm() - b.re).abs() / b.re < 1e-8);
    }
}

#[test]
fn outer_of_exp_cos_is_exp_z() {
    let g = Grid::new(4096).unwrap();
    let w = outer_from_modulus(&GridFunction::from_real_fn(g, |t| t.cos().exp())).unwrap();
    let z: Vec<Complex64> =
        (0..50).map(|k| Complex64::from_polar(0.9 * (k as f64 + 1.0) / 50.0, 0.7 * k as f64)).collect();
    for (v, z) in w.eval(&z).unwrap().iter().zip(&z) {
        assert!((v - z.exp()).norm() < 1e-8);
    }
}

#[test]
fn riesz_herglotz_reproduces_analytic_function() {
    let g = Grid::new(1024).unwrap();
    let h = GridFunction::from_real_fn(g, |t| 1.0 + (2.0 * t).cos());
    let z = [Complex64::new(0.3, 0.4), Complex64::new(-0.8, 0.1)];
    for (v, z) in riesz_herglotz(&h, &z).unwrap().iter().zip(&z) {
        assert!((v - (1.0 + z * z)).norm() < 1e-12);
    }
}

#[test]
fn eval_disk_matches_cauchy_integral() {
    let g = Grid::new(1024).unwrap();
    let s = FourierSeries::from_polynomial(
        g,
        &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(-0.5, 0.5)],
    )
    .unwrap();
    let z = [Complex64::new(0.2, -0.6), Complex64::new(0.5, 0.5)];
    let a = eval_disk(&s, &z).unwrap();
    let b = hardy_bep::hardy_functions::cauchy_integral(&fft_synthesize(&s), &z).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).norm() < 1e-12);
    }
}
