use std::process::{Command, Output};

use serde_json::Value;

fn amdkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amdkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn verify_strong_passes_with_exact_delta() {
    let out = amdkit(&["verify", "--kind", "strong", "--q", "5", "--k", "1", "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["report"]["security"]["delta_exact_num"], 2);
    assert_eq!(doc["report"]["security"]["delta_exact_den"], 5);
    assert_eq!(doc["params"]["q"], 5);
    assert_eq!(doc["tool"], "amdkit");
    assert!(doc["generator"].as_str().unwrap().starts_with("chacha20"));
}

#[test]
fn verify_weak_delta_is_one_over_q() {
    let out = amdkit(&["verify", "--kind", "weak", "--q", "5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["report"]["security"]["delta_exact"], 0.2);
}

#[test]
fn parameter_errors_exit_2() {
    let out = amdkit(&["verify", "--kind", "strong", "--q", "4", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k < q - 2"));
    assert_eq!(amdkit(&["verify", "--kind", "sideways", "--q", "5", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3() {
    let out = amdkit(&["--work-budget", "10", "verify", "--kind", "strong", "--q", "11", "--k", "2", "--sigma", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn frontier_csv_grid() {
    let out = amdkit(&["frontier", "--kind", "strong"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rho,kappa,feasible");
    assert_eq!(lines.len(), 362);
    assert!(lines.contains(&"0.25,0.45,true"));
    assert!(lines.contains(&"0.25,0.5,false"));
    let weak = String::from_utf8(amdkit(&["frontier", "--kind", "weak"]).stdout).unwrap();
    assert!(weak.lines().any(|l| l == "0.5,0.5,false"));
    assert!(weak.lines().any(|l| l == "0.2,0.3,true"));
}

#[test]
fn attacks_report_and_are_reproducible() {
    let args = ["--seed", "3", "--trials", "5000", "attack", "--name", "strong-case2", "--w", "3"];
    let a = amdkit(&args);
    let b = amdkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = report(&a);
    assert_eq!(doc["report"]["n_bits"], 9);
    assert_eq!(doc["report"]["t"], 8);

    let trivial = amdkit(&["attack", "--name", "weak-trivial", "--code", "cube", "--w", "4"]);
    assert_eq!(trivial.status.code(), Some(0));
    assert_eq!(report(&trivial)["report"]["estimate"], 1.0);

    let inapplicable = amdkit(&["attack", "--name", "strong-case1", "--code", "plain", "--k-bits", "2", "--sigma-bits", "8"]);
    assert_eq!(inapplicable.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&inapplicable.stderr).contains("inapplicable"));
}

#[test]
fn icm_reports_queries() {
    let out = amdkit(&["--trials", "2000", "icm", "--strategy", "replay-best-leak"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["report"]["query_budget"], 16);
    assert_eq!(doc["report"]["queries_used"], 16);
    let over = amdkit(&["--trials", "10", "icm", "--strategy", "replay-best-leak", "--queries", "17"]);
    assert_eq!(over.status.code(), Some(2));
}

#[test]
fn rss_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let deal = dir.path().join("deal.json");
    let out = amdkit(&["rss", "deal", "--message", "4", "--out", deal.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let back = amdkit(&["rss", "reconstruct", "--shares-file", deal.to_str().unwrap()]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(report(&back)["report"]["message"], "4");

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&deal).unwrap()).unwrap();
    let first = doc["report"]["shares"][0]["value"].as_str().unwrap().to_string();
    let mut values: Vec<u64> = first.split(',').map(|v| v.parse().unwrap()).collect();
    values[1] = (values[1] + 2) % 5;
    doc["report"]["shares"][0]["value"] = Value::String(values.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, doc.to_string()).unwrap();
    let tampered = amdkit(&["rss", "reconstruct", "--shares-file", bad.to_str().unwrap()]);
    assert_eq!(tampered.status.code(), Some(1));
    assert_eq!(report(&tampered)["report"]["tampered"], true);
}

#[test]
fn rss_tamper_detection_rate() {
    let out = amdkit(&["--trials", "4000", "rss", "tamper"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["report"]["honest_ok"], 4000);
    assert!(doc["report"]["tamper"]["estimate"].as_f64().unwrap() > 0.55);
}

#[test]
fn entropy_chain_rule_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("joint.json");
    std::fs::write(
        &path,
        r#"[{"x":0,"z":0,"p":0.5},{"x":1,"z":1,"p":0.25},{"x":2,"z":1,"p":0.25}]"#,
    )
    .unwrap();
    let out = amdkit(&["entropy", "--joint", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["report"]["h_min_x"], 1.0);
    assert_eq!(doc["report"]["chain_rule"]["holds"], true);
    let missing = amdkit(&["entropy", "--joint", "/nonexistent/joint.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("frontier.csv");
    let out = amdkit(&["--out", path.to_str().unwrap(), "frontier", "--kind", "weak", "--step", "0.25"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 10);
}
