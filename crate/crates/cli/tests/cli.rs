use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

const CYCLE4: &str = r#"{"n": 4, "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 0, 1]]}"#;

fn qmiddle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmiddle")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("cycle4.json");
    fs::write(&graph, CYCLE4).unwrap();
    (dir, graph)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn validate_reports_kind_and_exit_codes() {
    let (dir, _) = setup();
    let qdt = dir.path().join("qdt.json");
    fs::write(
        &qdt,
        json!({
            "$schema": "qdt-core.schema.json", "id": "reg_phase", "name": "phase", "width": 10,
            "encoding_kind": "PHASE_REGISTER", "bit_order": "LSB_0",
            "measurement_semantics": "AS_PHASE", "phase_scale": "1/1024"
        })
        .to_string(),
    )
    .unwrap();
    let out = qmiddle(&["validate", s(&qdt)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("reg_phase"));

    let mut bad = read_json(&qdt);
    bad["measurement_semantics"] = json!("AS_BOOL");
    fs::write(&qdt, bad.to_string()).unwrap();
    let out = qmiddle(&["validate", s(&qdt)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("measurement_semantics"));

    fs::write(&qdt, "{not json").unwrap();
    assert_eq!(qmiddle(&["validate", s(&qdt)]).status.code(), Some(1));
    assert_eq!(qmiddle(&["validate", s(&dir.path().join("missing.json"))]).status.code(), Some(2));
}

#[test]
fn validate_operator_against_supplied_registers() {
    let (dir, _) = setup();
    let qdt = dir.path().join("spin.json");
    fs::write(
        &qdt,
        json!({
            "$schema": "qdt-core.schema.json", "id": "ising_vars", "name": "s", "width": 4,
            "encoding_kind": "ISING_SPIN", "bit_order": "LSB_0", "measurement_semantics": "AS_BOOL"
        })
        .to_string(),
    )
    .unwrap();
    let op = dir.path().join("mixer.json");
    let doc = json!({
        "$schema": "qod.schema.json", "name": "mixer", "rep_kind": "MIXER_RX",
        "domain_qdt": "ising_vars", "codomain_qdt": "ising_vars", "params": {"beta": 0.5}
    });
    fs::write(&op, doc.to_string()).unwrap();
    assert_eq!(qmiddle(&["validate", s(&op), "--qdt", s(&qdt)]).status.code(), Some(0));
    let mut doc = doc;
    doc["domain_qdt"] = json!("elsewhere");
    fs::write(&op, doc.to_string()).unwrap();
    assert_eq!(qmiddle(&["validate", s(&op)]).status.code(), Some(0));
    let out = qmiddle(&["validate", s(&op), "--qdt", s(&qdt)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unresolved reference"));
}

#[test]
fn unknown_engine_builds_with_warning_and_fails_to_run() {
    let (dir, graph) = setup();
    let ctx = dir.path().join("ctx.json");
    fs::write(
        &ctx,
        json!({"$schema": "ctx.schema.json", "exec": {"engine": "cv.gaussian", "samples": 10, "seed": 1}}).to_string(),
    )
    .unwrap();
    let out = qmiddle(&["validate", s(&ctx)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("not runnable"));

    let job = dir.path().join("job.json");
    let out = qmiddle(&["build", "qaoa-maxcut", "--graph", s(&graph), "--context", s(&ctx), "--out", s(&job)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = qmiddle(&["run", s(&job)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cv.gaussian"));
}

#[test]
fn ising_problem_on_gate_context_is_unrealizable() {
    let (dir, graph) = setup();
    let ctx = dir.path().join("ctx.json");
    fs::write(
        &ctx,
        json!({"$schema": "ctx.schema.json", "exec": {"engine": "gate.statevector", "samples": 10, "seed": 1}})
            .to_string(),
    )
    .unwrap();
    let job = dir.path().join("job.json");
    let out = qmiddle(&["build", "ising-maxcut", "--graph", s(&graph), "--context", s(&ctx), "--out", s(&job)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!job.exists());
}

#[test]
fn overrides_replace_context_fields_and_are_recorded() {
    let (dir, graph) = setup();
    let job = dir.path().join("job.json");
    let out = qmiddle(&[
        "build", "ising-maxcut", "--graph", s(&graph), "--seed", "7", "--num-reads", "20", "--out", s(&job),
    ]);
    assert!(out.status.success());
    let v = read_json(&job);
    assert_eq!(v["context"]["exec"]["seed"], 7);
    assert_eq!(v["context"]["anneal"]["num_reads"], 20);
    assert_eq!(v["provenance"]["overrides"], json!({"seed": 7, "num_reads": 20}));

    let results = dir.path().join("results.json");
    assert!(qmiddle(&["run", s(&job), "--out", s(&results)]).status.success());
    let r = read_json(&results);
    assert_eq!(r["seed"], 7);
    let total: u64 = r["counts"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total, 20);
}

#[test]
fn explicit_angles_must_match_depth() {
    let (dir, graph) = setup();
    let job = dir.path().join("job.json");
    let base = ["build", "qaoa-maxcut", "--graph", s(&graph), "--out", s(&job)];
    let with = |extra: &[&str]| {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        qmiddle(&args).status.code()
    };
    assert_eq!(with(&["--p", "2"]), Some(1));
    assert_eq!(with(&["--p", "2", "--gamma", "0.1", "--beta", "0.2"]), Some(1));
    assert_eq!(with(&["--p", "2", "--gamma", "0.1", "--gamma", "-0.3", "--beta", "0.2", "--beta", "0.4"]), Some(0));
    assert_eq!(read_json(&job)["operators"].as_array().unwrap().len(), 6);
}

#[test]
fn qft_results_decode_to_exact_phases() {
    let (dir, _) = setup();
    let job = dir.path().join("qft.json");
    assert!(qmiddle(&["build", "qft", "--width", "3", "--out", s(&job)]).status.success());
    let v = read_json(&job);
    assert_eq!(v["qdts"][0]["phase_scale"], "1/8");
    assert_eq!(v["operators"][0]["cost_hint"]["twoq"], 6);

    let results = dir.path().join("results.json");
    assert!(qmiddle(&["run", s(&job), "--out", s(&results)]).status.success());
    let report = dir.path().join("report.json");
    let out = qmiddle(&["report", s(&results), "--job", s(&job), "--top", "8", "--out", s(&report)]);
    assert!(out.status.success());
    let r = read_json(&report);
    assert_eq!(r["n_outcomes"], 8);
    for rec in r["decoded"].as_array().unwrap() {
        let bits = rec["bits"].as_str().unwrap();
        let k: u64 = bits.chars().enumerate().map(|(i, c)| u64::from(c == '1') << i).sum();
        let expected = if k == 0 { "0/1".to_string() } else { render(k, 8) };
        assert_eq!(rec["value"]["phase_turns"], expected, "{bits}");
    }
}

fn render(k: u64, q: u64) -> String {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let g = gcd(k, q);
    format!("{}/{}", k / g, q / g)
}

#[test]
fn report_needs_a_graph_or_job() {
    let (dir, graph) = setup();
    let job = dir.path().join("job.json");
    let results = dir.path().join("results.json");
    assert!(qmiddle(&["build", "ising-maxcut", "--graph", s(&graph), "--out", s(&job)]).status.success());
    assert!(qmiddle(&["run", s(&job), "--out", s(&results)]).status.success());
    assert_eq!(qmiddle(&["report", s(&results)]).status.code(), Some(1));

    let tri = dir.path().join("tri.json");
    fs::write(&tri, r#"{"n": 3, "edges": [[0, 1, 1], [1, 2, 1], [0, 2, 1]]}"#).unwrap();
    let out = qmiddle(&["report", s(&results), "--graph", s(&tri)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_rejects_graphs_beyond_the_dense_limit() {
    let (dir, _) = setup();
    let big = dir.path().join("big.json");
    let edges: Vec<Value> = (0..17).map(|i| json!([i, (i + 1) % 17, 1])).collect();
    fs::write(&big, json!({"n": 17, "edges": edges}).to_string()).unwrap();
    assert_eq!(qmiddle(&["sweep-angles", "--graph", s(&big)]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_as_validation_failures() {
    assert_eq!(qmiddle(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qmiddle(&["build", "qft", "--out", "/dev/null"]).status.code(), Some(1));
    assert_eq!(qmiddle(&["--help"]).status.code(), Some(0));
}

#[test]
fn coupling_map_routes_qaoa_and_keeps_readout_logical() {
    let (dir, graph) = setup();
    let ctx = dir.path().join("ctx.json");
    fs::write(
        &ctx,
        json!({
            "$schema": "ctx.schema.json",
            "exec": {
                "engine": "gate.statevector", "samples": 4096, "seed": 42,
                "target": {"basis_gates": ["sx", "rz", "cx"], "coupling_map": [[0, 1], [1, 2], [2, 3]]}
            }
        })
        .to_string(),
    )
    .unwrap();
    let job = dir.path().join("job.json");
    let results = dir.path().join("results.json");
    let report = dir.path().join("report.json");
    assert!(qmiddle(&["build", "qaoa-maxcut", "--graph", s(&graph), "--context", s(&ctx), "--out", s(&job)]).status.success());
    assert!(qmiddle(&["run", s(&job), "--out", s(&results)]).status.success());
    let r = read_json(&results);
    assert_eq!(r["routing_overhead"]["swaps_inserted"], 2);
    assert!(r["warnings"].as_array().is_some_and(|w| !w.is_empty()));
    assert!(qmiddle(&["report", s(&results), "--graph", s(&graph), "--top", "2", "--out", s(&report)]).status.success());
    let report = read_json(&report);
    let best: Vec<&str> = report["best"].as_array().unwrap().iter().map(|b| b["bits"].as_str().unwrap()).collect();
    assert_eq!(best.len(), 2);
    assert!(best.contains(&"1010") && best.contains(&"0101"));
}
