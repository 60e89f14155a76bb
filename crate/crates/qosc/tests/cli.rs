use std::process::{Command, Output};

use serde_json::Value;

fn qosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qosc")).args(args).output().expect("runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn relations_report_passes() {
    let o = qosc(&["verify-relations", "--epsilon", "1,0,1,0,1", "--module", "W", "--cutoff", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "qosc/1");
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn perturbed_relations_exit_one() {
    let o = qosc(&["verify-relations", "--epsilon", "1,0,1,0,1", "--cutoff", "3", "--perturb"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    let failed: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).collect();
    assert!(failed.iter().any(|c| c["detail"].as_str().unwrap().contains("first at")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qosc(&["decompose", "--flavor", "x"]).status.code(), Some(2));
    assert_eq!(qosc(&["verify-relations", "--epsilon", "1,0,2,0,1"]).status.code(), Some(2));
    assert_eq!(qosc(&["fuse", "--flavor", "c", "--c", "q^^2,1"]).status.code(), Some(2));
    assert_eq!(qosc(&["appendix-check", "--which", "Z"]).status.code(), Some(2));
    assert_eq!(qosc(&["suite", "--only", "12"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["rmatrix", "--flavor", "c", "--sigma", "+,-", "--cutoff", "4"];
    let a = qosc(&args);
    let b = qosc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn decompose_json_and_csv() {
    let o = qosc(&["decompose", "--flavor", "c", "--sigma", "+,+", "--cutoff", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o)["data"]["multiplicities"].clone();
    assert!(rows.as_array().unwrap().iter().any(|r| r["lambda"] == serde_json::json!([2]) && r["mult"] == 1));

    let o = qosc(&["decompose", "--flavor", "c", "--sigma", "+,+", "--cutoff", "4", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("lambda,mult"));
    assert!(text.contains("\"(2)\",1"));
}

#[test]
fn inadmissible_fusion_fails() {
    let o = qosc(&["fuse", "--flavor", "c", "--sigma", "+,+", "--c", "q^2,1", "--cutoff", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hwv_lists_kernel_vectors() {
    let o = qosc(&["hwv", "--partition", "(2)", "--cutoff", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["data"]["dimension"], 1);
    assert!(v["data"]["vectors"][0].as_str().unwrap().contains("(x)"));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qosc-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let o = qosc(&["--out", p, "truncate", "--epsilon", "1,0,1,0,1", "--cutoff", "2", "--fundamentals"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["data"]["upper_truncation_dims"]["2"], 1);
    std::fs::remove_file(path).ok();
}
