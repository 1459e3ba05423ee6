use std::process::Command;

use fqt::funcfield::enumerate_pgl2;
use fqt::{Fq, RationalFunction};
use fqt_cli::experiments::{d_candidates, search_d, verify_counterexample, SearchDParams};
use serde_json::Value;

fn fqt(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fqt")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out) = fqt(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(fqt(&["no-such-command"]).0, 2);
    assert_eq!(fqt(&["behaved", "--p", "4", "--u", "t"]).0, 2);
    assert_eq!(fqt(&["behaved", "--u", "t^"]).0, 2);
    assert_eq!(fqt(&["run-suite", "nope"]).0, 2);
    assert_eq!(fqt(&["translate", "--sentence", "x = 1"]).0, 2);
    assert_eq!(fqt(&["run-suite", "m-values"]).0, 0);
}

#[test]
fn reports_echo_config() {
    let r = json(&["behaved", "--p", "5", "--l", "3", "--seed", "7", "--u", "t^3"]);
    assert_eq!(r["config"]["command"], "behaved");
    assert_eq!(r["config"]["p"], 5);
    assert_eq!(r["config"]["l"], 3);
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(r["config"]["args"]["u"], "t^3");
    assert_eq!(r["schema"], 1);
    assert_eq!(r["rows"][0]["is_behaved"], false);
}

#[test]
fn single_shot_commands() {
    let r = json(&["pasten", "--p", "13", "--g", "0", "--f", "t^13+1", "--h", "t+1"]);
    assert_eq!(r["rows"][0]["criterion"], true);
    assert_eq!(r["rows"][0]["ground_truth_s"], 1);
    let r = json(&["norm-check", "--p", "3", "--l", "2", "--u", "t", "--bound", "2"]);
    assert_eq!(r["rows"][0]["decision"], false);
    let r = json(&["norm-check", "--p", "3", "--l", "2", "--u", "t^2", "--bound", "2"]);
    assert_eq!(r["rows"][0]["decision"], true);
    assert!(r["rows"][0]["witness"].is_array());
    let r = json(&["two-squares", "--p", "3", "--f", "t^2+1"]);
    assert_eq!(r["rows"][0]["decision"], true);
    let r = json(&["psi-c", "--p", "3", "--u", "t"]);
    assert_eq!(r["rows"][0]["holds"], false);
    let (code, text) = fqt(&["translate", "--mode", "abstract", "--policy", "fixed-t", "--sentence", "E a. E b. E c. a = b + c"]);
    assert_eq!(code, 0);
    assert!(text.contains("(= z_a (* z_b z_c))"), "{text}");
    let (code, text) = fqt(&["emit-phi", "--g", "0", "--p", "13"]);
    assert_eq!(code, 0);
    assert_eq!(text.matches("(^ z").count(), 12);
}

#[test]
fn eval_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.sexp");
    let (_, text) = fqt(&["translate", "--sentence", "E a. a + a = 1 + 1"]);
    std::fs::write(&path, text).unwrap();
    let r = json(&["eval", "--p", "3", "--l", "2", "--u", "t", "--bound", "4", "--formula-file", path.to_str().unwrap()]);
    assert_eq!(r["rows"][0]["result"], "true");
    assert_eq!(r["rows"][0]["witnesses"]["z_a"], "t");
}

#[test]
fn out_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    let (code, _) = fqt(&["run-suite", "t-behaved", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["summary"]["items"], 14);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), "behaved,p");
    assert_eq!(text.lines().count(), 15);
}

#[test]
fn identity_transform_is_behaved_for_t() {
    let f = Fq::prime(3).unwrap();
    let r = verify_counterexample(3, &RationalFunction::t(&f), 2, 1).unwrap();
    let summary = r.rows.last().unwrap();
    let behaved = summary["behaved_transforms"].as_array().unwrap();
    assert!(behaved.contains(&serde_json::json!([1, 0, 0, 1])));
    assert_eq!(r.rows.len() - 1, 24);
    assert!(r.ok);
}

#[test]
fn higher_frobenius_powers_are_redundant() {
    let f = Fq::prime(3).unwrap();
    let u = RationalFunction::parse(&f, "t^6/(t^6+2)").unwrap();
    let a = verify_counterexample(3, &u, 2, 3).unwrap();
    assert!(a.ok);
    assert_eq!(a.summary.failed, 0);
    assert_eq!(enumerate_pgl2(&f).len(), 24);
}

#[test]
fn counterexample_rows_are_deterministic() {
    let f = Fq::prime(5).unwrap();
    let u = RationalFunction::parse(&f, "(t^6+2)/(t^6+t^2+2)").unwrap();
    let a = verify_counterexample(5, &u, 2, 1).unwrap();
    let b = verify_counterexample(5, &u, 2, 1).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.config, b.config);
}

#[test]
fn constant_candidates_die_immediately() {
    let params = SearchDParams { p: 3, l: 2, num_deg: 0, den_deg: 0, u_height: 2 };
    let out = search_d(&params, 4, None, None).unwrap();
    assert!(out.complete);
    assert!(out.survivors.is_empty());
    assert_eq!(out.report.rows.len(), 3);
    for row in &out.report.rows {
        assert_eq!(row["reason"], "constant");
    }
}

#[test]
fn resume_matches_uninterrupted_run() {
    let params = SearchDParams { p: 3, l: 2, num_deg: 2, den_deg: 1, u_height: 2 };
    let full = search_d(&params, 5, None, None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let mut rounds = 0;
    let resumed = loop {
        let out = search_d(&params, 5, Some(&ck), Some(3)).unwrap();
        rounds += 1;
        if out.complete {
            break out;
        }
    };
    assert!(rounds > 1);
    assert_eq!(full.survivors, resumed.survivors);
    assert_eq!(full.report.rows, resumed.report.rows);
    // another configuration must not pick up this checkpoint
    let other = SearchDParams { u_height: 1, ..params };
    assert!(search_d(&other, 5, Some(&ck), None).is_err());
}

#[test]
fn linear_candidates_report_falsifiers() {
    let f = Fq::prime(3).unwrap();
    assert_eq!(d_candidates(&f, 1, 0).len(), 9);
    let params = SearchDParams { p: 3, l: 2, num_deg: 1, den_deg: 0, u_height: 2 };
    let out = search_d(&params, 64, None, None).unwrap();
    assert!(out.report.ok);
    for row in &out.report.rows {
        assert!(row["survivor"] == true || row["falsifier"].is_string() || row["reason"] == "constant");
    }
}
