use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

const SCHEMA: &str = include_str!("../schema/report.schema.json");

fn desitter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_desitter"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    assert_valid(&v);
    v
}

/// Validates the envelope and every embedded `{value, tol, ...}` measure.
/// Named suite checks have their own shape and are skipped.
fn assert_valid(v: &Value) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let top = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = top.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}");
    let measure = jsonschema::validator_for(&json!({
        "$ref": "#/$defs/measure",
        "$defs": schema["$defs"],
    }))
    .unwrap();
    fn walk(v: &Value, f: &dyn Fn(&Value)) {
        match v {
            Value::Object(m) => {
                if m.contains_key("value") && m.contains_key("tol") && !m.contains_key("name") {
                    f(v);
                }
                m.values().for_each(|x| walk(x, f));
            }
            Value::Array(a) => a.iter().for_each(|x| walk(x, f)),
            _ => {}
        }
    }
    walk(v, &|m| assert!(measure.is_valid(m), "bad measure {m}"));
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn trefoil_report() {
    let out = desitter(&["analyze-curve"]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["drill_check"]["pass"], true);
    assert_eq!(r["vertices"]["vertex_free"], true);
    assert_eq!(r["corollary"]["verdict"], "pass");
    let abs_t = f(&r["conformal"]["int_abs_t_dt"]["value"]);
    let t = f(&r["conformal"]["int_t_dt"]["value"]);
    assert!(abs_t >= TAU);
    assert!((t.abs() - abs_t).abs() < 1e-8);
    assert!(f(&r["omega_routes"]["max_relative_deviation"]["value"]) < 1e-6);
}

#[test]
fn circle_is_rejected_with_a_vertex_block() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("err.json");
    let out = desitter(&[
        "analyze-curve",
        "--generator",
        "circle:radius=2",
        "--out-json",
        path_str(&json_path),
    ]);
    assert_eq!(code(&out), 2);
    let v = report(&out);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "vertex");
    assert_eq!(v["error"]["exit_code"], 2);
    assert_eq!(v["error"]["detail"]["degenerate"], true);
    let written: Value =
        serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    assert_eq!(written, v);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
}

#[test]
fn invariants_stable_under_resampling() {
    let get = |n: &str| {
        let out = desitter(&[
            "analyze-curve",
            "--generator",
            "torus-knot:p=2,q=3",
            "--samples",
            n,
        ]);
        assert_eq!(code(&out), 0);
        report(&out)["result"]["conformal"].clone()
    };
    let (a, b) = (get("64"), get("256"));
    for key in [
        "int_t_dt",
        "int_abs_t_dt",
        "total_torsion",
        "total_conformal_length",
    ] {
        let (x, y) = (f(&a[key]["value"]), f(&b[key]["value"]));
        assert!(
            (x - y).abs() <= 1e-6 * y.abs().max(1.0),
            "{key}: {x} vs {y}"
        );
    }
}

#[test]
fn curve_file_input_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.json");
    let n = 128;
    let samples: Vec<[f64; 3]> = (0..n)
        .map(|j| {
            let t = TAU * j as f64 / n as f64;
            [
                (2.0 + (3.0 * t).cos()) * (2.0 * t).cos(),
                (2.0 + (3.0 * t).cos()) * (2.0 * t).sin(),
                (3.0 * t).sin(),
            ]
        })
        .collect();
    std::fs::write(
        &curve,
        json!({ "dimension": 3, "period": TAU, "samples": samples }).to_string(),
    )
    .unwrap();
    let csv = dir.path().join("rows.csv");
    let out = desitter(&[
        "analyze-curve",
        "--input",
        path_str(&curve),
        "--out-csv",
        path_str(&csv),
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["source"]["kind"], "input");
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,arc_length,k,tau,dt_du,conformal_torsion,omega,omega_sphere_jet"
    );
    assert_eq!(lines.count(), n);

    let out = desitter(&["analyze-canal", "--input", path_str(&curve)]);
    assert_eq!(code(&out), 2);
    assert_eq!(report(&out)["error"]["kind"], "precondition");
}

#[test]
fn per_sample_arrays_on_request() {
    let out = desitter(&["analyze-curve", "--samples", "64", "--per-sample"]);
    assert_eq!(code(&out), 0);
    let per = &report(&out)["result"]["per_sample"];
    assert_eq!(per["points"].as_array().unwrap().len(), 64);
    let out = desitter(&["analyze-curve", "--samples", "64"]);
    assert!(report(&out)["result"].get("per_sample").is_none());
}

#[test]
fn minimal_drill_attains_two_pi() {
    let out = desitter(&[
        "analyze-canal",
        "--generator",
        "minimal-drill",
        "--lambda",
        "2+0.5*cos(3*s)",
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert!((f(&r["length"]["value"]) - TAU).abs() <= 1e-9);
    assert_eq!(r["classification"]["verdict"], "drill");
    assert_eq!(r["bound"]["verdict"], "pass");
    assert_eq!(r["bound"]["equality_family_detected"], true);
}

#[test]
fn cyclide_regimes() {
    let out = desitter(&[
        "analyze-canal",
        "--generator",
        "cyclide",
        "--x",
        "timelike",
        "1.0",
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["classification"]["verdict"], "regular");
    assert!((f(&r["length"]["value"]) - TAU * 2f64.sqrt()).abs() <= 1e-9);

    let out = desitter(&[
        "analyze-canal",
        "--generator",
        "cyclide",
        "--x",
        "spacelike",
        "0.6",
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["classification"]["verdict"], "singular");
    assert_eq!(r["bound"]["verdict"], "not_applicable");
    assert!((f(&r["length"]["value"]) - TAU * 0.8).abs() <= 1e-9);
}

#[test]
fn random_batch_respects_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("paths.csv");
    let args = [
        "analyze-canal",
        "--generator",
        "random",
        "--seed",
        "7",
        "--filter",
        "almost-regular",
        "--count",
        "100",
        "--out-csv",
        path_str(&csv),
    ];
    let out = desitter(&args);
    assert_eq!(code(&out), 0);
    let r = report(&out)["result"].clone();
    assert_eq!(r["count"], 100);
    assert_eq!(r["bound_checked"], 100);
    assert_eq!(r["bound_failures"], 0);
    assert!(f(&r["min_length"]["value"]) >= TAU - 1e-9);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 101);
    let again = desitter(&args);
    assert_eq!(report(&again)["result"], r, "batches are reproducible");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), text);
}

#[test]
fn cyclide_mesh_is_a_torus() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("cyclide.obj");
    let out = desitter(&[
        "mesh",
        "--generator",
        "cyclide",
        "--x",
        "timelike",
        "0.5",
        "--nt",
        "48",
        "--ntheta",
        "32",
        "--out-obj",
        path_str(&obj),
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["mesh"]["euler_characteristic"], 0);
    assert_eq!(r["mesh"]["closed"], true);
    let text = std::fs::read_to_string(obj).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("v ")).count(),
        48 * 32
    );
    assert_eq!(
        text.lines().filter(|l| l.starts_with("f ")).count(),
        2 * 48 * 32
    );
}

#[test]
fn curvature_tube_with_annotation() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("tube.obj");
    let out = desitter(&[
        "mesh",
        "--generator",
        "trefoil",
        "--nt",
        "64",
        "--ntheta",
        "24",
        "--out-obj",
        path_str(&obj),
    ]);
    assert_eq!(code(&out), 0);
    let r = &report(&out)["result"];
    assert_eq!(r["kind"], "curvature_tube");
    assert_eq!(r["singular_row"], 0);
    let ann = std::fs::read_to_string(dir.path().join("tube.obj.singular.txt")).unwrap();
    assert_eq!(ann.lines().filter(|l| !l.starts_with('#')).count(), 64);

    let named = dir.path().join("locus.txt");
    let out = desitter(&[
        "mesh",
        "--generator",
        "trefoil",
        "--nt",
        "32",
        "--ntheta",
        "16",
        "--out-obj",
        path_str(&obj),
        "--out-annotation",
        path_str(&named),
    ]);
    assert_eq!(code(&out), 0);
    assert!(named.exists());
}

#[test]
fn geodesic_mesh_falls_back_to_a_polyline() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("geodesic.obj");
    let out = desitter(&[
        "mesh",
        "--generator",
        "geodesic",
        "--out-obj",
        path_str(&obj),
    ]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(report(&out)["result"]["kind"], "polyline");
    let text = std::fs::read_to_string(obj).unwrap();
    assert!(text.lines().any(|l| l.starts_with("l ")));
    assert!(!text.lines().any(|l| l.starts_with("f ")));
}

#[test]
fn mesh_to_stdout() {
    let out = desitter(&["mesh", "--nt", "16", "--ntheta", "8"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 128);
    let stats: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_valid(&stats);
}

#[test]
fn quick_suite_passes_and_mutation_fails() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("suite.json");
    let out = desitter(&[
        "verify-suite",
        "--quick",
        "--out-json",
        path_str(&json_path),
    ]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{stdout}");
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("[PASS]")).count(),
        11
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_valid(&v);
    assert_eq!(v["result"]["pass"], true);

    let out = desitter(&["verify-suite", "--quick", "--mutate", "negate-torsion"]);
    assert_eq!(code(&out), 3);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().any(|l| l.starts_with("[FAIL]")));
}

#[test]
fn sweep_tabulates_without_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = desitter(&[
        "sweep",
        "--big-r",
        "3",
        "--small-r",
        "1",
        "--p",
        "1,2",
        "--q",
        "2,3",
        "--samples",
        "128",
        "--out-csv",
        path_str(&csv),
    ]);
    assert_eq!(code(&out), 0);
    let v = report(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"]["count"], 4);
    for row in v["result"]["rows"].as_array().unwrap() {
        if let Some(r) = row["congruence_residual"].as_f64() {
            assert!(r < 1e-6);
            assert!(f(&row["omega_total"]) >= TAU);
        }
    }
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with(
        "index,family,params,vertex_free,margin,spherical_points,omega_total,t_total,total_torsion,congruence_residual"
    ));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"generator": "torus-knot:p=2,q=5", "samples": 128}"#,
    )
    .unwrap();
    let out = desitter(&["analyze-curve", "--config", path_str(&cfg)]);
    assert_eq!(code(&out), 0);
    let v = report(&out);
    assert_eq!(v["options"]["generator"], "torus-knot:p=2,q=5");
    assert_eq!(v["result"]["curve"]["samples"], 128);

    let out = desitter(&[
        "analyze-curve",
        "--config",
        path_str(&cfg),
        "--samples",
        "256",
    ]);
    assert_eq!(report(&out)["result"]["curve"]["samples"], 256);

    std::fs::write(&cfg, r#"{"sampels": 128}"#).unwrap();
    let out = desitter(&["analyze-curve", "--config", path_str(&cfg)]);
    assert_eq!(code(&out), 2);
    assert_eq!(report(&out)["error"]["kind"], "parse");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(code(&desitter(&["analyze-curve", "--no-such-flag"])), 2);
    assert_eq!(code(&desitter(&["analyze-curve", "--samples", "63"])), 2);
    assert_eq!(code(&desitter(&["analyze-curve", "--tol", "-1"])), 2);
    assert_eq!(
        code(&desitter(&["analyze-curve", "--generator", "pretzel"])),
        2
    );
    assert_eq!(
        code(&desitter(&[
            "analyze-curve",
            "--generator",
            "constant-angle:p=2,q=4"
        ])),
        2
    );
    assert_eq!(
        code(&desitter(&[
            "analyze-canal",
            "--generator",
            "cyclide",
            "--x",
            "warped",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&desitter(&[
            "analyze-canal",
            "--generator",
            "minimal-drill",
            "--lambda",
            "2+"
        ])),
        2
    );
    let out = desitter(&["analyze-curve", "--input", "/no/such/file.json"]);
    assert_ne!(code(&out), 0);
    assert_eq!(report(&out)["status"], "error");
}

#[test]
fn schema_command_prints_the_schema() {
    let out = desitter(&["schema"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["$id"], "desitter-report/1");
}
