//! End-to-end checks of the command-line interface: formats, exit codes,
//! and report determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_locallim"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("locallim-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn sample_decompose_round_trip() {
    let out = tmp("sample.edges");
    let st = run(&[
        "sample", "gnm", "--n", "50", "--m", "40", "--seed", "7", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# sampler: gnm n=50 m=40"));

    let dec = run(&["decompose", out.to_str().unwrap()]);
    assert_eq!(dec.status.code(), Some(0));
    let csv = String::from_utf8(dec.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,m,n_u,m_u,v_q,v_c,v_k,e_k,v_l,v_rest_of_q"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("50,40,"));
    std::fs::remove_file(&out).ok();
}

#[test]
fn decompose_theta_golden() {
    let theta = tmp("theta.edges");
    std::fs::write(&theta, "4 5\n1 2\n1 3\n1 4\n2 3\n2 4\n").unwrap();
    let dec = run(&["decompose", theta.to_str().unwrap()]);
    assert_eq!(dec.status.code(), Some(0));
    let csv = String::from_utf8(dec.stdout).unwrap();
    assert_eq!(
        csv,
        "n,m,n_u,m_u,v_q,v_c,v_k,e_k,v_l,v_rest_of_q\n4,5,0,0,4,4,2,3,4,0\n"
    );
    // JSON mode parses and carries the kernel paths
    let js = run(&["decompose", theta.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&js.stdout).unwrap();
    assert_eq!(v["kernel"]["n"], 2);
    assert_eq!(v["subdivision"].as_array().unwrap().len(), 3);
    std::fs::remove_file(&theta).ok();
}

#[test]
fn ball_census_counts_path_centres() {
    let p = tmp("c5.edges");
    std::fs::write(&p, "5 5\n1 2\n1 5\n2 3\n3 4\n4 5\n").unwrap();
    let out = run(&[
        "ball-census",
        p.to_str().unwrap(),
        "--radius",
        "1",
        "--tree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "5");
    std::fs::remove_file(&p).ok();
}

#[test]
fn usage_errors_exit_2() {
    // m out of range
    let out = run(&["sample", "gnm", "--n", "4", "--m", "20"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown sampler
    let out = run(&["sample", "nonsense", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed graph file
    let p = tmp("bad.edges");
    std::fs::write(&p, "2 1\n2 1\n").unwrap();
    let out = run(&["decompose", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr was: {err}");
    std::fs::remove_file(&p).ok();
}

#[test]
fn budget_errors_exit_3() {
    // the class of 4-vertex graphs with 5 edges and no complex component is
    // empty, so rejection must exhaust its budget
    let out = run(&[
        "sample", "noncomplex", "--n", "4", "--m", "5", "--budget", "50",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn empty_planar_class_is_usage_error() {
    let out = run(&["sample", "planar", "--n", "5", "--m", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dist_sampler_and_file_modes() {
    let out = run(&[
        "dist", "gnm", "--n", "20", "--m", "10", "-N", "200", "--radius", "1", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["total"], 200);

    let p = tmp("dist.edges");
    std::fs::write(&p, "3 2\n1 2\n2 3\n").unwrap();
    let out = run(&[
        "dist",
        p.to_str().unwrap(),
        "-N",
        "100",
        "--radius",
        "1",
        "--csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8_lossy(&out.stdout);
    assert!(csv.starts_with("code,count,frequency\n"));
    std::fs::remove_file(&p).ok();

    // kernel policy on a forest: every draw skipped -> usage error
    let p2 = tmp("forest.edges");
    std::fs::write(&p2, "4 2\n1 2\n3 4\n").unwrap();
    let out = run(&[
        "dist",
        p2.to_str().unwrap(),
        "--policy",
        "kernel",
        "-N",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&p2).ok();
}

#[test]
fn experiment_runs_twice_byte_identical() {
    let cfg = tmp("exp.json");
    let csv1 = tmp("exp1.csv");
    let csv2 = tmp("exp2.csv");
    let manifest = tmp("exp.manifest.json");
    let config = serde_json::json!({
        "suite": "gw-conditioning",
        "seed": 5,
        "output": csv1.to_str().unwrap(),
        "manifest": manifest.to_str().unwrap(),
    });
    std::fs::write(&cfg, serde_json::to_string(&config).unwrap()).unwrap();
    let out = run(&["experiment", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let config2 = serde_json::json!({
        "suite": "gw-conditioning",
        "seed": 5,
        "output": csv2.to_str().unwrap(),
    });
    std::fs::write(&cfg, serde_json::to_string(&config2).unwrap()).unwrap();
    let out = run(&["experiment", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&csv1).unwrap(),
        std::fs::read_to_string(&csv2).unwrap()
    );

    // report re-renders the same CSV from the manifest
    let rep = run(&["report", manifest.to_str().unwrap()]);
    assert_eq!(rep.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&rep.stdout),
        std::fs::read_to_string(&csv1).unwrap()
    );
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert!(m["config_hash"].as_str().unwrap().len() == 64);
    for f in [&cfg, &csv1, &csv2, &manifest] {
        std::fs::remove_file(f).ok();
    }
}

#[test]
fn experiment_unknown_suite_exits_2() {
    let cfg = tmp("bad-suite.json");
    std::fs::write(&cfg, r#"{"suite":"nope","seed":1}"#).unwrap();
    let out = run(&["experiment", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&cfg).ok();
}
