//! End-to-end tests against the built binary.

use std::process::{Command, Output};

fn haarspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_haarspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectrum_2_2_matches_closed_form() {
    let out = haarspec(&["spectrum", "--d", "2", "--t", "2"]);
    let v = stdout_json(&out);
    assert_eq!(v["ambient_dim"], "3");
    let lines = v["lines"].as_array().unwrap();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["eig_num"], "1");
    assert_eq!(lines[0]["eig_den"], "4");
    assert_eq!(lines[0]["mult"], "2");
    assert_eq!(lines[1]["eig_num"], "1");
    assert_eq!(lines[1]["eig_den"], "2");
    assert_eq!(lines[1]["mult"], "1");
}

#[test]
fn binary_phase_spectrum_includes_kernel() {
    let out = haarspec(&["spectrum", "--d", "2", "--t", "2", "--ensemble", "binary-phase"]);
    let v = stdout_json(&out);
    assert_eq!(v["zero_multiplicity"], "1");
    assert_eq!(v["lines"][0]["eig_num"], "1");
    assert_eq!(v["lines"][0]["eig_den"], "2");
    assert_eq!(v["lines"][0]["mult"], "2");
}

#[test]
fn distance_2_3_uses_closed_form() {
    let out = haarspec(&["distance", "--d", "2", "--t", "3"]);
    let v = stdout_json(&out);
    assert_eq!(v["method"], "closed_form");
    assert_eq!(v["trace_distance"][0], "1");
    assert_eq!(v["trace_distance"][1], "4");
}

#[test]
fn distance_methods_agree_on_the_value() {
    let spectral = haarspec(&["distance", "--d", "3", "--t", "2", "--method", "spectral-sum"]);
    let closed = haarspec(&["distance", "--d", "3", "--t", "2", "--method", "closed-form"]);
    let a = stdout_json(&spectral);
    let b = stdout_json(&closed);
    assert_eq!(a["exact"], b["exact"]);
    assert_ne!(a["method"], b["method"]);
}

#[test]
fn distance_operator_norm() {
    let out = haarspec(&["distance", "--d", "2", "--t", "2", "--p", "inf"]);
    let v = stdout_json(&out);
    assert_eq!(v["exact"][0], "1");
    assert_eq!(v["exact"][1], "6");
    assert!(v.get("trace_distance").is_none());
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["montecarlo", "--d", "2", "--t", "2", "--samples", "2000", "--seed", "11"];
    let a = haarspec(&args);
    let b = haarspec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["spectrum", "--d", "3", "--t", "4"];
    let a = haarspec(&args);
    let b = haarspec(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_env_var_is_honored() {
    let run = |seed_env: &str| {
        Command::new(env!("CARGO_BIN_EXE_haarspec"))
            .env("HAARSPEC_SEED", seed_env)
            .args(["imaginarity", "--d", "2", "--samples", "500"])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("1");
    let c = run("2");
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn precondition_errors_exit_2_with_json_stderr() {
    let out = haarspec(&["spectrum", "--d", "1", "--t", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "domain");
    assert_eq!(err["exit"], 2);

    let out = haarspec(&["spectrum", "--d", "2", "--t", "3", "--ensemble", "binary-phase"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_cap_exits_3() {
    let out = haarspec(&[
        "montecarlo", "--d", "2", "--t", "13", "--samples", "10", "--max-dim", "4096",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "resource_cap");
}

#[test]
fn verify_exact_suite_passes() {
    let out = haarspec(&["verify", "--suite", "exact", "--max-dim", "64"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v.as_array().unwrap().iter().all(|o| o["passed"].as_bool().unwrap()));
    let progress = String::from_utf8_lossy(&out.stderr);
    assert!(progress.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn scan_emits_csv_grid() {
    let out = haarspec(&["scan", "--d-max", "3", "--t-max", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "d,t,p,exact_num,exact_den,float,method,regime");
    assert_eq!(lines.count(), 4);
    assert!(text.contains("2,2,1,1,3,"));
}

#[test]
fn imaginarity_dump_writes_samples() {
    let dir = std::env::temp_dir().join("haarspec-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("samples.csv");
    let out = haarspec(&[
        "imaginarity", "--d", "3", "--samples", "300", "--seed", "4",
        "--dump", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "imaginarity");
    assert_eq!(lines.count(), 300);
    std::fs::remove_file(&path).ok();
}

#[test]
fn design_bound_requires_a_request() {
    let out = haarspec(&["design-bound", "--d", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let out = haarspec(&["design-bound", "--d", "10", "--t", "2"]);
    let v = stdout_json(&out);
    assert!(v["epsilon_floor"].is_array());
}

#[test]
fn design_bound_rejects_out_of_window_probability() {
    let out = haarspec(&["design-bound", "--d", "100", "--p", "0.99"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["kind"], "unsupported_regime");
}
