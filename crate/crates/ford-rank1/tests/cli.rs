use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ford-rank1"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(bytes)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sigma_region_is_the_unit_sphere() {
    let o = run(&["region", path(&spec("sigma"))]);
    assert_eq!(code(&o), 0);
    let v = json(&o.stdout);
    let spheres = v["spheres"].as_array().unwrap();
    assert_eq!(spheres.len(), 1);
    assert_eq!(spheres[0]["radius"], 1.0);
    assert_eq!(spheres[0]["word"], "S");
    assert_eq!(v["stabilizer"]["kind"], "whole-space");
}

#[test]
fn reduce_inverts_a_low_point() {
    let o = run(&["reduce", path(&spec("sigma")), "--point", "(0.25,0)"]);
    assert_eq!(code(&o), 0);
    let v = json(&o.stdout);
    assert_eq!(v["word"], "S");
    let zeta = v["image"]["zeta"][0].as_f64().unwrap();
    assert!((zeta - 4.0).abs() < 1e-12, "{zeta}");
    assert!(v["image"]["v"][0][0].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn point_on_the_sphere_is_boundary() {
    let o = run(&["contains", "--spec", path(&spec("sigma")), "--point", "(1,0)"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o.stdout)["membership"], "Boundary");
    let o = run(&["contains", "--spec", path(&spec("sigma")), "--point", r#"{"zeta": [3], "v": [[0]]}"#]);
    assert_eq!(json(&o.stdout)["membership"], "Inside");
}

#[test]
fn validate_rejects_a_perturbed_generator() {
    let dir = tempfile::tempdir().unwrap();
    let good = std::fs::read_to_string(spec("sigma")).unwrap();
    let bad = good.replacen("[0, 0, -1]", "[0, 0, -1.001]", 1);
    assert_ne!(good, bad);
    let p = dir.path().join("bad.json");
    std::fs::write(&p, bad).unwrap();
    let o = run(&["validate", path(&p)]);
    assert_eq!(code(&o), 1);
    let v = json(&o.stdout);
    assert_eq!(v["valid"], false);
    assert!(v["generators"][0]["q_residual"].as_f64().unwrap() > 1e-4);

    for name in ["sigma", "modular", "sigma_quaternionic"] {
        let o = run(&["validate", path(&spec(name))]);
        assert_eq!(code(&o), 0, "{name}");
    }
}

#[test]
fn empty_spec_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("empty.json");
    std::fs::write(&p, "").unwrap();
    for cmd in ["validate", "region"] {
        let o = run(&[cmd, path(&p)]);
        assert_eq!(code(&o), 2);
        let e = json(&o.stderr);
        assert_eq!(e["error"], "parse");
        assert_eq!(e["exit_code"], 2);
    }
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["region", "/nonexistent/spec.json"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o.stderr)["error"], "io");

    let o = run(&["--tolerance", "dedup=-1", "region", path(&spec("sigma"))]);
    assert_eq!(code(&o), 2);

    let o = run(&["contains", "--spec", path(&spec("sigma")), "--point", "(1,2,3,4)"]);
    assert_eq!(code(&o), 2);

    let o = run(&["no-such-command"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn exhausted_budget_reports_partial_state() {
    let o = run(&["reduce", path(&spec("modular")), "--point", "(0.05,0.3)", "--budget", "0"]);
    assert_eq!(code(&o), 3);
    let e = json(&o.stderr);
    assert_eq!(e["error"], "BudgetExhausted");
    assert_eq!(e["partial"]["steps"], 0);
    assert_eq!(e["partial"]["word"], "id");
}

#[test]
fn modular_reduction_ends_inside() {
    for p in ["(0.05,0.3)", "(0.3,0.01)", "(0.02,-0.15)"] {
        let o = run(&["reduce", path(&spec("modular")), "--point", p]);
        assert_eq!(code(&o), 0, "{p}");
        let v = json(&o.stdout);
        let heights: Vec<f64> = v["heights"].as_array().unwrap().iter().map(|h| h.as_f64().unwrap()).collect();
        assert!(heights.windows(2).all(|w| w[1] > w[0]), "{heights:?}");
        let image = serde_json::to_string(&v["image"]).unwrap();
        let o = run(&["contains", "--spec", path(&spec("modular")), "--point", &image]);
        assert_ne!(json(&o.stdout)["membership"], "Outside", "{p}");
    }
}

#[test]
fn stored_region_classifies_like_the_spec() {
    let dir = tempfile::tempdir().unwrap();
    let region = dir.path().join("region.json");
    let o = run(&["region", path(&spec("modular")), "--output", path(&region)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    for i in 0..12 {
        for j in 0..6 {
            let v = -0.9 + 0.15 * f64::from(i);
            let zeta = 0.5 * v * v + 0.05 + 0.2 * f64::from(j);
            let p = format!("({zeta},{v})");
            let a = run(&["contains", "--spec", path(&spec("modular")), "--point", &p]);
            let b = run(&["contains", "--region", path(&region), "--point", &p]);
            assert_eq!(code(&a), 0);
            assert_eq!(json(&a.stdout), json(&b.stdout), "{p}");
        }
    }
}

#[test]
fn verify_is_independent_of_thread_count() {
    let modular = spec("modular");
    let args = ["verify", path(&modular), "--samples", "400", "--seed", "11", "--word-length", "5"];
    let one = run_env(&args, &[("FORD_RANK1_THREADS", "1")]);
    let four = run_env(&args, &[("FORD_RANK1_THREADS", "4")]);
    assert_eq!(code(&one), 0, "{}", String::from_utf8_lossy(&one.stdout));
    assert_eq!(one.stdout, four.stdout);
    let v = json(&one.stdout);
    assert_eq!(v["passed"], true);
    assert_eq!(v["disjointness"]["violations"], 0);

    let bad = run_env(&args, &[("FORD_RANK1_THREADS", "zero")]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn render_is_deterministic() {
    let modular = spec("modular");
    let args = ["render", "--spec", path(&modular), "--model", "upper", "--resolution", "128"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(r#"class="slab""#));
    assert!(svg.contains(r#"data-word="S""#));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.svg");
    let o = run(&[
        "render",
        "--spec",
        path(&spec("sigma_quaternionic")),
        "--axes",
        "v0,height",
        "--fix",
        "im2=0.3",
        "--output",
        path(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&out).unwrap().contains(r#"class="sphere""#));

    let o = run(&["render", "--spec", path(&spec("sigma")), "--axes", "im2,height"]);
    assert_eq!(code(&o), 2);
    let o = run(&["render", "--spec", path(&spec("sigma")), "--resolution", "9000"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn render_traces() {
    let o = run(&["render", "--spec", path(&spec("sigma"))]);
    assert_eq!(code(&o), 0);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="sphere""#).count(), 1);

    // translations only: no spheres, just the strip
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(spec("modular")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["generators"].as_array_mut().unwrap().truncate(1);
    let p = dir.path().join("t.json");
    std::fs::write(&p, v.to_string()).unwrap();
    let o = run(&["render", "--spec", path(&p), "--model", "upper"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let svg = String::from_utf8(o.stdout).unwrap();
    assert_eq!(svg.matches(r#"class="sphere""#).count(), 0);
    assert_eq!(svg.matches(r#"class="slab""#).count(), 1);
}

#[test]
fn decompose_sigma() {
    let o = run(&["decompose", "--field", "C", "--matrix", "[[0,1,0],[1,0,0],[0,0,-1]]"]);
    assert_eq!(code(&o), 0);
    let v = json(&o.stdout);
    assert_eq!(v["inversion"], true);
    assert_eq!(v["t"], 1.0);
    assert_eq!(v["radius"], 1.0);
}

#[test]
fn invariants_pass_for_every_field() {
    for field in ["R", "C", "H"] {
        let o = run(&["invariants", "--field", field, "--n", "3", "--samples", "100", "--seed", "5"]);
        assert_eq!(code(&o), 0, "{field}: {}", String::from_utf8_lossy(&o.stdout));
        assert_eq!(json(&o.stdout)["passed"], true);
    }
}

#[test]
fn spheres_lists_enumerated_elements() {
    let o = run(&["spheres", path(&spec("modular")), "--word-length", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o.stdout);
    let radii: Vec<f64> = v["spheres"].as_array().unwrap().iter().map(|s| s["radius"].as_f64().unwrap()).collect();
    assert!(!radii.is_empty());
    assert!(radii.windows(2).all(|w| w[0] >= w[1]));
    assert!((radii[0] - 1.0).abs() < 1e-12);
}
