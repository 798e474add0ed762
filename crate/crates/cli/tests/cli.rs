use std::path::PathBuf;
use std::process::{Command, Output};

use artin_lab_cli::report::{Outcome, SuiteReport, SCHEMA};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_artin-lab")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", "diagrams", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn certificate_of_an_abi_tree_is_settled() {
    let v = json(&bin(&["certificate", &fixture("abi_tree.json")]));
    assert_eq!(v["verdict"], "settled");
    let v = json(&bin(&["classify", &fixture("abi_tree.json")]));
    assert_eq!(v["abi"], true);
}

#[test]
fn certificate_lists_obligations() {
    let v = json(&bin(&["certificate", &fixture("d4.json")]));
    assert_eq!(v["verdict"], "open");
    assert_eq!(v["obligations"], serde_json::json!(["E_{1,1,1}"]));
    let v = json(&bin(&["classify", &fixture("f4.json")]));
    assert_eq!(v["names"], serde_json::json!(["F_{1,1}", "F_4"]));
}

#[test]
fn cores_report_configurations() {
    let v = json(&bin(&["cores", &fixture("ctilde4.json")]));
    let rows = v.as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["core"]["robustness"] == "asserted"));
}

#[test]
fn complex_build_counts() {
    let a3 = fixture("a3.json");
    let v = json(&bin(&["complex", "build", &a3]));
    assert_eq!((v["vertices"].as_array().unwrap().len(), v["chambers"].as_array().unwrap().len()), (14, 24));
    let v = json(&bin(&["complex", "build", &a3, "--subdivide", "B", "--layout", "s1,s3,s2"]));
    assert_eq!((v["vertices"].as_array().unwrap().len(), v["chambers"].as_array().unwrap().len()), (26, 48));
    assert_eq!(v["fake"].as_array().unwrap().len(), 12);
    let v = json(&bin(&["complex", "build", &a3, "--relative", "s1,s3"]));
    assert_eq!(v["types"], serde_json::json!(["s1", "s3"]));
    let bad = bin(&["complex", "build", &a3, "--relative", "s9"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("artin-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    for (p, workers) in [(&a, "1"), (&b, "3")] {
        let out = Command::new(env!("CARGO_BIN_EXE_artin-lab"))
            .args(["verify", "poset", "--seed", "7", "--out", p.to_str().unwrap()])
            .env("ARTIN_LAB_WORKERS", workers)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let r: SuiteReport = serde_json::from_slice(&ta).unwrap();
    assert_eq!((r.schema.as_str(), r.seed, r.suite.as_str()), (SCHEMA, 7, "poset"));
    assert_eq!(r.summary.values().sum::<usize>(), r.cases.len());
    assert!(r.cases.iter().all(|c| c.verdict == Outcome::Pass && c.wall_ms.is_none()));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["verify", "diagram"]).status.code(), Some(0));
    assert_eq!(bin(&["verify", "unknown"]).status.code(), Some(2));
    assert_eq!(bin(&["classify", "/does/not/exist.json"]).status.code(), Some(2));
    // a cap of one element makes every group cap-limited, which is not a failure
    let out = bin(&["verify", "coxeter", "--cap", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r: SuiteReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.cases.iter().all(|c| c.verdict == Outcome::CapLimited));
}

#[test]
fn verify_bihelly_reports_the_existence_failures() {
    let out = bin(&["verify", "bihelly"]);
    assert_eq!(out.status.code(), Some(1));
    let r: SuiteReport = serde_json::from_slice(&out.stdout).unwrap();
    let bad: Vec<&str> = r.cases.iter().filter(|c| c.verdict.is_bad()).map(|c| c.id.as_str()).collect();
    assert_eq!(bad, ["bihelly/geodesics/box-2-extremal", "bihelly/geodesics/box-3-extremal"]);
    let w = &r.cases.iter().find(|c| c.id == bad[0]).unwrap().witness;
    assert_eq!(w["from"], serde_json::json!([0]));
    assert_eq!(w["to"], serde_json::json!([7, 11]));
}
