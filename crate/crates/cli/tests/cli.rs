use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const E: f64 = std::f64::consts::E;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zjtangent")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn schema_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schema/v1")
}

fn load_schema(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(format!("{name}.schema.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Validates `doc` against `schema/v1/<name>.schema.json`, with the sibling
/// schemas registered for `$ref`.
fn assert_valid(name: &str, doc: &Value) {
    let mut opts = jsonschema::options();
    for sibling in ["model", "path"] {
        let s = load_schema(sibling);
        let id = s["$id"].as_str().unwrap().to_string();
        opts = opts.with_resource(id, jsonschema::Resource::from_contents(s).unwrap());
    }
    let v = opts.build(&load_schema(name)).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}

fn model_file(json: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    std::fs::write(f.path(), json).unwrap();
    f
}

fn mandel(v: &Value) -> Vec<Vec<f64>> {
    serde_json::from_value(v["matrix"].clone()).unwrap()
}

#[test]
fn tangent_at_stretched_state_reports_three_blocks() {
    let model = model_file(r#"{"model": "hencky", "mu": 1, "lambda": 1}"#);
    let o = run(&["tangent", "--model", model.path().to_str().unwrap(), "--F", "diag(e,1,1)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = stdout_json(&o);
    assert_valid("envelope", &doc);
    assert_valid("tangent", &doc);
    let t = &doc["result"]["tangents"];
    let blocks: Vec<_> =
        ["h_zj_tau_absolute", "h_zj_tau_lagrangian", "h_zj_tau_direct"].iter().map(|k| mandel(&t[k])).collect();
    for b in &blocks[1..] {
        let d = (0..6).flat_map(|a| (0..6).map(move |c| (a, c))).map(|(a, c)| (b[a][c] - blocks[0][a][c]).abs());
        assert!(d.fold(0.0, f64::max) < 1e-6);
    }
    let r = &t["residuals"];
    for k in [
        "tau_absolute_vs_lagrangian",
        "tau_absolute_vs_direct",
        "tau_lagrangian_vs_direct",
        "sigma_absolute_vs_from_tau",
    ] {
        assert!(r[k].as_f64().unwrap() < 1e-6, "{k}");
    }
    assert!((t["J"].as_f64().unwrap() - E).abs() < 1e-12);
    assert_eq!(doc["result"]["sigma_tangent_symmetry"]["passed"], false);
}

#[test]
fn tangent_at_identity_is_isotropic() {
    let o = run(&["tangent", "--model", "hencky", "--F", "1,0,0, 0,1,0, 0,0,1"]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    for k in ["h_zj_tau_absolute", "h_zj_tau_lagrangian", "h_zj_tau_direct", "h_zj_sigma_absolute"] {
        let m = mandel(&doc["result"]["tangents"][k]);
        for a in 0..6 {
            for b in 0..6 {
                let expect = if a == b { 2.0 } else { 0.0 } + if a < 3 && b < 3 { 1.0 } else { 0.0 };
                assert!((m[a][b] - expect).abs() < 1e-12, "{k}[{a}][{b}]");
            }
        }
    }
}

#[test]
fn malformed_json_exits_2_with_position() {
    let model = model_file("{\n  \"model\": \"hencky\",\n  \"mu\": 1,\n}\n");
    let o = run(&["tangent", "--model", model.path().to_str().unwrap(), "--F", "diag(1,1,1)"]);
    assert_eq!(code(&o), 2);
    let doc = stdout_json(&o);
    assert_valid("envelope", &doc);
    let msg = doc["failures"][0].as_str().unwrap();
    assert!(msg.contains("line 4 column 1"), "{msg}");
    assert!(stderr(&o).contains("line 4 column 1"));
}

#[test]
fn invalid_inputs_exit_2() {
    let cases: &[&[&str]] = &[
        &["tangent"],
        &["tangent", "--F", "diag(1,1)"],
        &["tangent", "--F", "diag(-1,1,1)"],
        &["tangent", "--model", r#"{"model":"hencky","mu":-1,"lambda":0}"#, "--F", "diag(1,1,1)"],
        &["simulate", "--path", "torsion"],
        &["sweep", "--range", "1:0.5:0.1"],
        &["products", "--format", "csv", "--P", "1,2"],
        &["check", "--format", "csv"],
        &["run"],
        &["run", "--config", r#"{"command":"sweep","colour":"red"}"#],
        &["run", "--config", r#"{"command":"sweep","tolerances":{"symm":1}}"#],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stdout_json(&o)["failures"].as_array().unwrap().is_empty(), "{args:?}");
    }
}

#[test]
fn sweep_defaults_reproduce_global_stability() {
    let model = model_file(r#"{"model": "hencky", "mu": 1, "lambda": 1}"#);
    let o = run(&["sweep", "--model", model.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("stable: all 6 paths"), "{}", stderr(&o));
    let doc = stdout_json(&o);
    assert_valid("sweep", &doc);
    assert_eq!(doc["result"]["evaluations"], 6 * 991);
    assert_eq!(doc["result"]["unstable_points"], 0);
}

#[test]
fn unstable_sweep_exits_1_and_still_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.json");
    let o = run(&["sweep", "--model", r#"{"model":"hencky","mu":1,"lambda":-1}"#, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_valid("sweep", &doc);
    assert_eq!(doc["passed"], false);
    assert_eq!(doc["failures"].as_array().unwrap().len(), 1);
    assert!(doc["result"]["unstable_points"].as_u64().unwrap() > 0);
}

#[test]
fn uniaxial_csv_sigma_peaks_at_e() {
    let o = run(&["uniaxial", "--law", "hencky", "--range", "0.1:10:0.01"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let (il, is) =
        (header.iter().position(|h| *h == "lambda").unwrap(), header.iter().position(|h| *h == "sigma").unwrap());
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[il].parse().unwrap(), c[is].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 991);
    let peak = rows.iter().cloned().fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    assert!((peak.0 - E).abs() <= 0.01, "peak at {}", peak.0);
    assert!((peak.1 - 1.0 / E).abs() < 1e-4);
}

#[test]
fn uniaxial_json_matches_schema_and_tolerance_flags_apply() {
    let o = run(&["uniaxial", "--law", "svk", "--range", "0.5:2:0.05", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_valid("uniaxial", &stdout_json(&o));
    let o = run(&["uniaxial", "--law", "hencky", "--format", "json", "--tol.bridge_1d", "1e-300"]);
    assert_eq!(code(&o), 1);
    assert!(stdout_json(&o)["failures"][0].as_str().unwrap().contains("bridge residual"));
}

#[test]
fn simulate_rk4_reaches_closed_form() {
    let o = run(&["simulate", "--path", "uniaxial", "--steps", "1000", "--scheme", "rk4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = stdout_json(&o);
    assert_valid("simulate", &doc);
    assert!(doc["result"]["terminal_relative_error"].as_f64().unwrap() < 1e-8);
    assert_eq!(doc["result"]["tau_numeric"].as_array().unwrap().len(), 1001);
    // too few Euler steps misses the tolerance and is reported as a failure
    let o = run(&["simulate", "--path", "uniaxial", "--steps", "10", "--scheme", "euler"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn check_bundle_passes_for_stable_hencky_and_flags_hill_violation() {
    let o = run(&["check", "--model", "hencky", "--F", "diag(1.4,0.9,1.2)"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = stdout_json(&o);
    assert_valid("check", &doc);
    for k in ["symmetry", "hill", "tsts", "det"] {
        assert_eq!(doc["result"][k]["passed"], true, "{k}");
    }
    let o = run(&["check", "--model", r#"{"model":"hencky","mu":1,"lambda":-1}"#, "--samples", "2000"]);
    assert_eq!(code(&o), 1);
    let doc = stdout_json(&o);
    assert_eq!(doc["result"]["hill"]["passed"], false);
    assert!(doc["result"]["hill"]["details"]["violating_pair"].is_object());
}

#[test]
fn products_tables() {
    let o = run(&["products", "--P", "diag(1,2,3)", "--Q", "diag(1,1,1)", "--Z", "0,1,0, 0,0,0, 0,0,0"]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    assert_valid("products", &doc);
    let p = &doc["result"]["products"];
    // P ⊗̲ 𝟙 maps Z to P Z, so Z = e₁⊗e₂ is unchanged for P = diag(1,2,3)
    assert_eq!(p["otimes_down"]["action_on_Z"][0][1], 1.0);
    // P ⊗̄ 𝟙 maps Z to P Zᵀ
    assert_eq!(p["otimes_up"]["action_on_Z"][1][0], 2.0);
    let o = run(&["products", "--format", "csv"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1 + 5 * 81);
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let cfg = model_file(
        r#"{"command": "check", "model": {"model": "hencky", "mu": 1, "lambda": 0.5},
            "F": "diag(1.1,0.95,1.05)", "seed": 7, "samples": 500}"#,
    );
    let a = run(&["run", "--config", cfg.path().to_str().unwrap()]);
    let b = run(&["run", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["result"]["hill"]["seed"], 7);
    let c = run(&["run", "--config", cfg.path().to_str().unwrap(), "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
    let s1 = run(&["sweep", "--range", "0.5:2:0.05"]);
    let s2 = run(&["sweep", "--range", "0.5:2:0.05"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn config_file_drives_commands_and_flags_override() {
    let cfg = model_file(
        r#"{"command": "sweep", "model": {"model": "hencky_incompressible", "mu": 2},
            "grid": {"min": 0.5, "max": 2, "step": 0.1}, "output": {"format": "csv"}}"#,
    );
    let o = run(&["run", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1 + 6 * 16);
    let o = run(&["run", "--config", cfg.path().to_str().unwrap(), "--format", "json"]);
    let doc = stdout_json(&o);
    assert_eq!(doc["result"]["subspace"], "traceless");
    assert_eq!(doc["schema"], "zjtangent/v1/sweep");
}

#[test]
fn schema_files_are_valid_json_schemas() {
    for entry in std::fs::read_dir(schema_dir()).unwrap() {
        let path = entry.unwrap().path();
        let s: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(jsonschema::meta::is_valid(&s), "{}", path.display());
    }
    assert_valid(
        "config",
        &serde_json::json!({
            "command": "simulate", "model": {"model": "hencky", "mu": 1, "lambda": 1},
            "path": {"label": "p", "kind": "simple_shear", "from": 0, "to": 1, "t_span": [0, 1]},
            "scheme": "rk4", "steps": 100, "tolerances": {"integration": 1e-6}
        }),
    );
}
