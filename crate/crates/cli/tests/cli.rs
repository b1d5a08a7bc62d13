use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ipsforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipsforge"))
        .args(args)
        .env_remove("IPSFORGE_BUDGET_N")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn refute_then_verify_in_separate_process() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let out = ipsforge(&[
        "refute",
        "--family",
        "linear-shifted",
        "--p",
        "2",
        "--k",
        "3",
        "--n",
        "4",
        "--seed",
        "7",
        "--out",
        path(&cert),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["verification"]["valid"], true);
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["provenance"]["constructor"], "frobenius");

    let out = ipsforge(&["verify", path(&cert)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["valid"], true);
    assert_eq!(report["residual_terms"], 0);
}

#[test]
fn every_family_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["--family", "linear-shifted", "--p", "3", "--k", "2", "--n", "3"],
        &["--family", "linear-base", "--p", "2", "--k", "2", "--n", "3"],
        &["--family", "sparse-shifted", "--p", "2", "--k", "2", "--n", "3"],
        &["--family", "lifted-pairwise", "--p", "2", "--k", "2", "--n", "3"],
        &["--family", "symmetric", "--p", "2", "--n", "4", "--m", "2"],
        &[
            "--family",
            "linear-base",
            "--p",
            "5",
            "--n",
            "2",
            "--constructor",
            "nullstellensatz",
        ],
    ];
    for (i, args) in cases.iter().enumerate() {
        let cert = dir.path().join(format!("c{i}.json"));
        let mut full = vec!["refute", "--seed", "3", "--out", path(&cert)];
        full.extend_from_slice(args);
        let out = ipsforge(&full);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let out = ipsforge(&["verify", path(&cert)]);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn refute_from_generated_instance_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let out = ipsforge(&[
        "gen",
        "--family",
        "sparse-shifted",
        "--p",
        "3",
        "--k",
        "1",
        "--n",
        "3",
        "--out",
        path(&inst),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = ipsforge(&["refute", "--instance", path(&inst), "--constructor", "sparse"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["provenance"]["constructor"], "sparse");
}

#[test]
fn symmetric_text_input() {
    let out = ipsforge(&[
        "refute",
        "--family",
        "symmetric",
        "--p",
        "3",
        "--n",
        "2",
        "--poly",
        "e1+e2+1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["instance"][0], "1*x1*x2 + 1*x1 + 1*x2 + 1");
    assert_eq!(v["verification"]["valid"], true);
}

#[test]
fn mathematical_failures_exit_two() {
    let out = ipsforge(&["refute", "--family", "linear-base", "--p", "2", "--poly", "x1 + x2 + 1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "satisfiable_instance");

    let out = ipsforge(&[
        "refute",
        "--family",
        "linear-shifted",
        "--p",
        "3",
        "--poly",
        "x1 + x2 + 1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "beta_in_subfield");

    let out = ipsforge(&[
        "refute",
        "--family",
        "linear-base",
        "--p",
        "5",
        "--n",
        "2",
        "--constructor",
        "nullstellensatz",
        "--max-degree",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "no_certificate_at_degree");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["refute"][..],
        &["experiment", "nope"],
        &["oracle", "nope"],
        &["refute", "--family", "symmetric", "--constructor", "frobenius"],
        &["frobnicate"],
        &["oracle", "degree-trial", "--n", "13"],
    ] {
        let out = ipsforge(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    let out = ipsforge(&["oracle", "degree-trial", "--n", "13"]);
    assert_eq!(stderr_json(&out)["error"], "budget_exceeded");
}

#[test]
fn budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ipsforge"))
        .args(["oracle", "sparsity", "--n", "6"])
        .env("IPSFORGE_BUDGET_N", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_json(&out)["message"].as_str().unwrap().contains("cap 5"));
}

#[test]
fn corrupted_coefficient_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    ipsforge(&[
        "refute",
        "--family",
        "linear-base",
        "--p",
        "3",
        "--k",
        "2",
        "--n",
        "3",
        "--out",
        path(&cert),
    ]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let a0 = v["A"][0].as_str().unwrap().to_string();
    v["A"][0] = Value::from(format!("{a0} + x1"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let out = ipsforge(&["verify", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let report = json(&out);
    assert_eq!(report["valid"], false);
    assert_ne!(report["residual"], "0");
}

#[test]
fn field_mismatch_between_files() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let inst = dir.path().join("inst.json");
    ipsforge(&[
        "refute",
        "--family",
        "linear-base",
        "--p",
        "2",
        "--k",
        "2",
        "--n",
        "3",
        "--out",
        path(&cert),
    ]);
    ipsforge(&[
        "gen",
        "--family",
        "linear-base",
        "--p",
        "3",
        "--k",
        "2",
        "--n",
        "3",
        "--out",
        path(&inst),
    ]);
    let out = ipsforge(&["verify", path(&cert), "--instance", path(&inst)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"], "field_mismatch");
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"field\": \"GF(3^1)\",\n  oops\n}").unwrap();
    let out = ipsforge(&["verify", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"], "parse_error");
    assert_eq!(err["line"], 3);
}

#[test]
fn identical_config_gives_identical_bytes() {
    for args in [
        &[
            "refute",
            "--family",
            "lifted-pairwise",
            "--p",
            "2",
            "--k",
            "2",
            "--n",
            "4",
            "--seed",
            "9",
        ][..],
        &[
            "oracle",
            "degree-trial",
            "--p",
            "2",
            "--k",
            "8",
            "--n",
            "3",
            "--trials",
            "50",
            "--seed",
            "4",
        ],
        &[
            "oracle",
            "roabp-width",
            "--instance",
            "any-order",
            "--n",
            "2",
            "--seed",
            "2",
        ],
        &[
            "gen",
            "--family",
            "symmetric",
            "--p",
            "3",
            "--n",
            "5",
            "--seed",
            "1",
            "--format",
            "text",
        ],
    ] {
        let a = ipsforge(args);
        let b = ipsforge(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn oracle_reports_cite_bounds() {
    let out = ipsforge(&[
        "oracle",
        "degree-trial",
        "--n",
        "4",
        "--p",
        "2",
        "--k",
        "12",
        "--trials",
        "200",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cited_bound"]["value"], 0.9375);
    assert_eq!(v["within_3_sigma"], true);

    let v = json(&ipsforge(&[
        "oracle",
        "roabp-width",
        "--instance",
        "fixed-order",
        "--n",
        "4",
    ]));
    assert!(v["value"].as_u64().unwrap() >= 16);

    let v = json(&ipsforge(&["oracle", "top-coeff", "--n", "3", "--seed", "5"]));
    assert_eq!(v["agree"], true);

    let v = json(&ipsforge(&["oracle", "numerator", "--n", "3", "--p", "3"]));
    assert_eq!(v["is_one"], true);
}

#[test]
fn sweep_lists_the_grid() {
    let out = ipsforge(&["experiment", "sweep-frobenius"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 54);
    for r in rows {
        assert!(r["max_degree_a"].as_u64() <= r["degree_bound_kp"].as_u64());
    }
}
