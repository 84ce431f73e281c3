use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const PI: f64 = std::f64::consts::PI;

fn bep(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bep"));
    cmd.args(args);
    cmd.env_remove("BEP_THREADS");
    if let Some(t) = threads {
        cmd.env("BEP_THREADS", t);
    }
    cmd.output().unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn instance(builtin: &str) -> Value {
    json!({"grid_n": 512, "arcs_I": [[0.0, PI]], "f": {"builtin": builtin}})
}

#[test]
fn extendable_instance_exits_zero() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", &instance("half_z"));
    let out = dir.path().join("report.json");
    let o = bep(&["solve", s(&spec), "-o", s(&out)], Some("2"));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read(&out);
    assert!(r["scalars"]["primal"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["scalars"]["converged"], json!(true));
    assert_eq!(r["g0"].as_array().unwrap().len(), 512);
    assert_eq!(r["lambda"].as_array().unwrap().len(), 257);
    assert_eq!(r["provenance"]["grid_n"], json!(512));
    assert_eq!(r["provenance"]["threads"], json!(2));
}

#[test]
fn input_errors_exit_one_and_name_the_field() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "a.json", &json!({"f": {"builtin": "half_z"}}));
    let o = bep(&["solve", s(&spec)], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("arcs_I"), "{}", stderr(&o));

    let mut v = instance("const2");
    v["solver"] = json!({"options": {"tol_gap": "small"}});
    let spec = write(&dir, "b.json", &v);
    let o = bep(&["solve", s(&spec)], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("solver.options.tol_gap"), "{}", stderr(&o));

    let o = bep(&["solve", s(&dir.path().join("missing.json"))], None);
    assert_eq!(o.status.code(), Some(1));

    let spec = write(&dir, "c.json", &instance("const2"));
    let o = bep(&["solve", s(&spec)], Some("zero"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("BEP_THREADS"));
}

#[test]
fn non_convergence_exits_two_and_still_writes() {
    let dir = TempDir::new().unwrap();
    let mut v = instance("const2");
    v["solver"] = json!({"options": {"max_iters": 2}});
    let spec = write(&dir, "spec.json", &v);
    let out = dir.path().join("report.json");
    let o = bep(&["solve", s(&spec), "-o", s(&out)], None);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert_eq!(read(&out)["scalars"]["converged"], json!(false));
}

#[test]
fn reports_are_byte_identical_with_one_thread() {
    let dir = TempDir::new().unwrap();
    let mut v = instance("conj_z");
    v["arcs_I"] = json!([[0.3, 2.0], [3.0, 4.4]]);
    let spec = write(&dir, "spec.json", &v);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = bep(&["solve", s(&spec), "-o", s(out)], Some("1"));
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn snapped_arcs_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut v = instance("conj_z");
    v["arcs_I"] = json!([[0.31, 2.07]]);
    let spec = write(&dir, "spec.json", &v);
    let first = dir.path().join("first.json");
    assert_eq!(bep(&["solve", s(&spec), "-o", s(&first)], Some("1")).status.code(), Some(0));
    let snapped = read(&first)["provenance"]["snapped_arcs"].clone();
    assert_ne!(snapped, v["arcs_I"]);
    v["arcs_I"] = snapped;
    let spec2 = write(&dir, "spec2.json", &v);
    let second = dir.path().join("second.json");
    assert_eq!(bep(&["solve", s(&spec2), "-o", s(&second)], Some("1")).status.code(), Some(0));
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn both_methods_write_cross_validation() {
    let dir = TempDir::new().unwrap();
    let mut v = instance("const2");
    v["solver"] = json!({"method": "both", "degree": 8});
    let spec = write(&dir, "spec.json", &v);
    let out = dir.path().join("report.json");
    let o = bep(&["solve", s(&spec), "-o", s(&out)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read(&out);
    let cv = &r["cross_validation"];
    assert_eq!(cv["degree"], json!(8));
    let l2 = cv["l2_diff_circle"].as_f64().unwrap();
    assert!(l2 > 0.0 && l2 < 1.0);
    assert!(cv["primal_diff"].as_f64().unwrap() >= 0.0);
    assert_eq!(r["poly"]["coeffs"].as_array().unwrap().len(), 9);
    assert_eq!(r["provenance"]["solver"], json!("both"));
}

#[test]
fn poly_method_with_constant_bound() {
    let dir = TempDir::new().unwrap();
    let mut v = instance("const2");
    v["M"] = json!({"constant": 1.5});
    v["solver"] = json!({"method": "poly", "degree": 4});
    let spec = write(&dir, "spec.json", &v);
    let out = dir.path().join("report.json");
    let o = bep(&["solve", s(&spec), "-o", s(&out)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read(&out);
    assert!(r["lambda"].as_array().unwrap().is_empty());
    let max_j = r["g0"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|row| row[0].as_f64().unwrap() > PI)
        .map(|row| row[1].as_f64().unwrap().hypot(row[2].as_f64().unwrap()))
        .fold(0.0, f64::max);
    assert!(max_j <= 1.5 * (1.0 + 1e-6), "{max_j}");

    v["M"] = json!({"samples": [[4.0, 1.0], [5.0, 2.0]]});
    let spec = write(&dir, "spec2.json", &v);
    let o = bep(&["solve", s(&spec)], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("constant"));
}

#[test]
fn exports_have_expected_rows() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", &instance("const2"));
    let rep = dir.path().join("report.json");
    let o = bep(&["poly", s(&spec), "--degrees", "4,2,8", "-o", s(&rep)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let csv = |kind: &str| {
        let o = bep(&["export", s(&rep), "--kind", kind], None);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        String::from_utf8(o.stdout).unwrap()
    };
    let modulus = csv("boundary_modulus");
    assert_eq!(modulus.lines().next(), Some("theta,value"));
    assert_eq!(modulus.lines().count(), 1 + 512);

    let lambda = csv("lambda");
    let thetas: Vec<f64> = lambda.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(thetas.len(), 257);
    assert!(thetas.iter().all(|&t| t == 0.0 || t >= PI - 1e-12));
    assert_eq!(thetas[0], 0.0);
    assert!(thetas.windows(2).all(|w| w[0] < w[1]));

    let conv = csv("convergence");
    let degrees: Vec<&str> = conv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(conv.lines().next(), Some("n,error"));
    assert_eq!(degrees, ["2", "4", "8"]);

    let out = dir.path().join("lambda.csv");
    assert_eq!(bep(&["export", s(&rep), "--kind", "lambda", "-o", s(&out)], None).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), lambda);

    let o = bep(&["export", s(&rep), "--kind", "spectrum"], None);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr(&o);
    for k in ["boundary_modulus", "lambda", "convergence", "recovery"] {
        assert!(e.contains(k), "{e}");
    }
    assert_eq!(bep(&["export", s(&rep), "--kind", "recovery"], None).status.code(), Some(1));
}

#[test]
fn recovery_of_a_rational_function() {
    let dir = TempDir::new().unwrap();
    let mut v = instance("pole");
    v["grid_n"] = json!(4096);
    let spec = write(&dir, "spec.json", &v);
    let rep = dir.path().join("rec.json");
    let o = bep(&["recover", s(&spec), "--z", "0.0+0.0i", "--nmax", "40", "--strength", "1.0", "-o", s(&rep)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = read(&rep);
    assert_eq!(r["recovery"]["reference"], json!([-0.5, -0.0]));
    let rows = r["recovery"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 40);
    assert!(rows[39]["error"].as_f64().unwrap() < 1e-4);
    let csv = String::from_utf8(bep(&["export", s(&rep), "--kind", "recovery"], None).stdout).unwrap();
    assert_eq!(csv.lines().count(), 41);

    let o = bep(&["recover", s(&spec), "--z", "0.999+0i"], None);
    assert_eq!(o.status.code(), Some(1));
    let o = bep(&["recover", s(&spec), "--z", "-0.2-0.3i", "--nmax", "5"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn ingest_then_solve() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("data.csv");
    let mut text = String::from("omega,re,im\n");
    for k in (0..64).rev() {
        let om = -4.0 + 8.0 * k as f64 / 63.0;
        text.push_str(&format!("{om},{},{}\n", 1.0, 0.5 * om));
    }
    std::fs::write(&data, text).unwrap();
    let spec = dir.path().join("spec.json");
    let o = bep(&["ingest-hp", s(&data), "--band", "-2,2", "--grid-n", "512", "-o", s(&spec)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    let v = read(&spec);
    let arc = v["arcs_I"][0].as_array().unwrap();
    let (a, b) = (arc[0].as_f64().unwrap(), arc[1].as_f64().unwrap());
    let h = 2.0 * PI / 512.0;
    assert!((a - (PI - 2.0 * 2f64.atan())).abs() <= h / 2.0);
    assert!((b - (PI + 2.0 * 2f64.atan())).abs() <= h / 2.0);
    let out = dir.path().join("report.json");
    let o = bep(&["solve", s(&spec), "-o", s(&out)], None);
    assert!(matches!(o.status.code(), Some(0) | Some(2)), "{}", stderr(&o));
    assert_eq!(read(&out)["provenance"]["data"], json!("samples"));

    let short = dir.path().join("short.csv");
    std::fs::write(&short, "0,1,0\n1,1,0\n").unwrap();
    assert_eq!(bep(&["ingest-hp", s(&short), "--band", "0,1"], None).status.code(), Some(1));
}
