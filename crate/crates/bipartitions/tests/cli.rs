//! Golden-run tests for the command-line interface: output schemas, the
//! exit-code contract, and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipartitions"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn coeffs_first_rows() {
    let out = run(&["coeffs", "--l", "3", "--T", "3", "--no-timestamp"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "{\"n\":0,\"value\":1}\n{\"n\":1,\"value\":2}\n{\"n\":2,\"value\":5}\n"
    );
}

#[test]
fn coeffs_rejects_zero_truncation() {
    let out = run(&["coeffs", "--l", "3", "--T", "0"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2), "usage errors exit 2");
}

#[test]
fn coeffs_modular_row() {
    let out = run(&["coeffs", "--l", "5", "--T", "35", "--mod", "5", "--no-timestamp"]);
    assert!(out.status.success());
    let last = stdout(&out).lines().last().unwrap().to_string();
    assert_eq!(last, "{\"n\":34,\"value\":0}");
}

#[test]
fn coeffs_csv_format() {
    let out = run(&["coeffs", "--l", "3", "--T", "3", "--format", "csv", "--no-timestamp"]);
    assert_eq!(stdout(&out), "0,1\n1,2\n2,5\n");
}

#[test]
fn eta_profile_and_exit_codes() {
    let out = run(&["eta", "--spec", "6^4", "--no-timestamp"]);
    assert!(out.status.success());
    let line = stdout(&out);
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["level"], 36);
    assert_eq!(v["weight"], "2");
    assert_eq!(v["thm23_ok"], true);
    assert_eq!(v["cusps"].as_array().unwrap().len(), 9);

    let out = run(&["eta", "--spec", "3^8", "--no-timestamp"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["level"], 9);
    assert_eq!(v["weight"], "4");

    // Transformation-law violation is a verdict, not an error; exit 1.
    let out = run(&["eta", "--spec", "1^-2*5^2", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["thm23_ok"], false);

    // Garbage specs are usage errors.
    let out = run(&["eta", "--spec", "6^", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn radu_proved_report_schema() {
    let out = run(&[
        "radu", "--p", "3", "--m", "5^2", "--t", "9", "--u", "3", "--no-timestamp",
    ]);
    assert!(out.status.success(), "proved run exits 0");
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["status"], "proved");
    assert_eq!(v["kappa"], 24);
    assert_eq!(v["A_t"], 5);
    assert_eq!(v["epsilon_p"], 1);
    assert_eq!(v["P_t"], serde_json::json!([9, 24]));
    assert_eq!(v["nu"], 87);
    assert_eq!(v["checked"], 87);
    assert_eq!(v["witness"], serde_json::Value::Null);
}

#[test]
fn radu_strict_s_widens_orbit() {
    let out = run(&[
        "radu", "--p", "3", "--m", "5^2", "--t", "9", "--u", "3", "--strict-s", "--no-timestamp",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["P_t"], serde_json::json!([9, 14, 19, 24]));
    assert_eq!(v["status"], "proved");
}

#[test]
fn radu_sweep_exit_code_reflects_counterexamples() {
    let out = run(&["radu", "--p", "5", "--m", "7", "--t", "all", "--u", "5", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(1), "counterexamples exit 1");
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3, "three orbits at m = 7");
    assert!(text.contains("counterexample"));
}

#[test]
fn families_and_hecke_and_newman() {
    let out = run(&[
        "families", "--id", "coro3", "--p", "5", "--k", "0", "--j", "1", "--nmax", "200",
        "--no-timestamp",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["verdict"], "pass");

    let out = run(&["hecke", "--series", "eta6_4", "--q", "5,7", "--T", "600", "--no-timestamp"]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["lambda"], 0);
    assert_eq!(lines[1]["lambda"], -4);

    let out = run(&["newman", "--kind", "f1f3", "--p", "7", "--T", "500", "--no-timestamp"]);
    assert!(out.status.success());

    let out = run(&["newman", "--kind", "f1cubed_f5", "--discover", "200", "--no-timestamp"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let primes: Vec<u64> =
        v["qualifying_primes"].as_array().unwrap().iter().map(|p| p.as_u64().unwrap()).collect();
    for p in [103, 157, 193] {
        assert!(primes.contains(&p));
    }
}

#[test]
fn density_row() {
    let out = run(&["density", "--l", "5", "--p", "5", "--j", "1", "--X", "1000", "--no-timestamp"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["X"], 1000);
    assert_eq!(v["divisible"], 821);
    assert_eq!(v["fraction"], "821/1000");
}

#[test]
fn deterministic_output_without_timestamp() {
    let args = ["radu", "--p", "3", "--m", "5^2", "--t", "9", "--u", "3", "--no-timestamp"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "byte-identical reruns");
    // With the timestamp the only difference is that field.
    let stamped = run(&args[..args.len() - 1]);
    let v: serde_json::Value = serde_json::from_str(stdout(&stamped).trim()).unwrap();
    assert!(v.get("generated_at").is_some());
}

#[test]
fn resource_cap_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_bipartitions"))
        .args(["coeffs", "--l", "3", "--T", "1000", "--no-timestamp"])
        .env("BIPARTITIONS_MAX_COEFFS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "cap exceeded exits nonzero");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap"), "stderr explains the cap: {err}");
}

#[test]
fn pretty_format_tables_go_to_stderr() {
    let out = run(&[
        "eta", "--spec", "6^4", "--format", "pretty", "--no-timestamp",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with('{'), "stdout stays machine-readable");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cusp"), "table lands on stderr");
}
