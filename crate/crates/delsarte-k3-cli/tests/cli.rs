//! Black-box tests of the command-line interface: exit codes, JSON schema,
//! byte stability, format switches, and agreement of the counting methods.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_delsarte-k3"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn CLI")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn count_methods_agree_and_exit_zero() {
    let out = run(&["count", "--family", "C4", "--p", "11", "--psi", "2", "--method", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "delsarte-k3/1");
    assert_eq!(v["brute"], 134);
    assert_eq!(v["koblitz"], 134);
    assert_eq!(v["closed"], 134);
    assert_eq!(v["agree"], true);
}

#[test]
fn rational_psi_is_reduced_mod_p() {
    // 1/2 = 6 mod 11, so the two invocations must count the same fiber.
    let a = run(&["count", "--family", "C4", "--p", "11", "--psi", "1/2", "--method", "brute"]);
    let b = run(&["count", "--family", "C4", "--p", "11", "--psi", "6", "--method", "brute"]);
    assert_eq!(a.status.code(), Some(0));
    let va = stdout_json(&a);
    let vb = stdout_json(&b);
    assert_eq!(va["psi"], 6);
    assert_eq!(va["brute"], vb["brute"]);
}

#[test]
fn reports_are_byte_stable() {
    for args in [
        vec!["pf-params", "--family", "C2C2"],
        vec!["verify", "--family", "C2C2", "--p", "13", "--psi", "1", "--terms", "2"],
        vec!["gauss", "--p", "13"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(first.stdout, second.stdout, "unstable output for {args:?}");
    }
}

#[test]
fn verify_reports_rows_and_twist() {
    let out = run(&["verify", "--family", "C2F2", "--p", "13", "--psi", "1", "--terms", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["twist_choice"].is_i64());
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["lhs"], 172.0);
    for row in rows {
        assert!(row["residual"].as_f64().unwrap() < 1e-4);
    }
}

#[test]
fn pf_params_reproduces_the_six_rows() {
    let out = run(&["pf-params", "--family", "C2C2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["lattice_size"], 16);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let holomorphic = &rows[0];
    assert_eq!(holomorphic["character"], 0);
    let alpha: Vec<&str> = holomorphic["alpha"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap())
        .collect();
    assert_eq!(alpha, ["1/6", "1/3", "2/3", "5/6"]);
    let beta: Vec<&str> = holomorphic["beta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap())
        .collect();
    assert_eq!(beta, ["1/2", "1/1", "1/1", "1/1"]);
    assert_eq!(holomorphic["t_exponent"], -6);
    assert_eq!(holomorphic["t_constant"], "1/16");
}

#[test]
fn fixtures_emit_json_lines() {
    let out = run(&["fixtures", "--family", "C2C2", "--p", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0]["family"], "C2C2");
    assert_eq!(lines[0]["psi"], 1);
    assert_eq!(lines[0]["count"], 98);
    assert_eq!(lines[2]["psi"], 3);
    assert_eq!(lines[2]["count"], 56);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixtures.jsonl");
    let out = run(&[
        "fixtures",
        "--family",
        "C2C2",
        "--p",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let direct = run(&["fixtures", "--family", "C2C2", "--p", "7"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn csv_and_human_formats_render() {
    let csv = run(&[
        "count", "--family", "C4", "--p", "11", "--psi", "2", "--method", "brute", "--format",
        "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("family,p,u,q,psi,brute"));
    assert!(text.contains("C4,11,1,11,2,134"));

    let human = run(&[
        "count", "--family", "C4", "--p", "11", "--psi", "2", "--method", "brute", "--format",
        "human",
    ]);
    let text = String::from_utf8(human.stdout).unwrap();
    assert!(text.contains("brute"));
    assert!(text.contains("134"));
}

#[test]
fn gauss_certifications_are_within_bounds() {
    let out = run(&["gauss", "--p", "13"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let g0 = v["g_zero"].as_array().unwrap();
    assert!((g0[0].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!(g0[1].as_f64().unwrap().abs() < 1e-9);
    assert!(v["max_theta_residual"].as_f64().unwrap() < 1e-8);
    let hd = v["hasse_davenport"].as_array().unwrap();
    assert!(!hd.is_empty());
    for row in hd {
        assert!(row["max_residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn usage_errors_exit_two() {
    let unknown_family = run(&["count", "--family", "X9", "--p", "11", "--psi", "1"]);
    assert_eq!(unknown_family.status.code(), Some(2));
    assert!(!unknown_family.stderr.is_empty());

    let unknown_flag = run(&["count", "--family", "C4", "--p", "11", "--psi", "1", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(2));

    let unknown_subcommand = run(&["frobnicate"]);
    assert_eq!(unknown_subcommand.status.code(), Some(2));

    let bad_prime = run(&["verify", "--family", "C4", "--p", "7", "--psi", "1"]);
    assert_eq!(bad_prime.status.code(), Some(2));
}
