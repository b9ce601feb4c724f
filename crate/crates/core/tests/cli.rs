//! The `sbcn` executable: exit codes and input validation, plus output files.

use std::path::Path;
use std::process::{Command, Output};

use sbcn::{BinaryDataset, SbcnModel};

fn sbcn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbcn")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = sbcn(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn simulate(dir: &Path, mode: &str, samples: &str) {
    ok(dir, &["--seed", "7", "simulate", "--mode", mode, "--samples", samples, "--out-data", "d.csv", "--out-truth", "t.json"]);
}

#[test]
fn famafrench_simulation_has_fifteen_variables() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "famafrench", "500");
    let data = sbcn::model::load_dataset(dir.path().join("d.csv")).unwrap();
    assert_eq!((data.n(), data.m()), (15, 500));
    assert_eq!(&data.names()[..5], ["Km", "SMB", "HML", "RMW", "CMA"]);
    assert!(data.rank()[..5].iter().all(|&r| r == 0) && data.rank()[5..].iter().all(|&r| r == 1));
    let truth: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(truth["edges"].as_array().unwrap().len(), 54);
}

#[test]
fn sparse_simulation_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    simulate(a.path(), "sparse", "250");
    simulate(b.path(), "sparse", "250");
    for f in ["d.csv", "t.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
    let data: BinaryDataset = sbcn::model::load_dataset(a.path().join("d.csv")).unwrap();
    assert_eq!(data.n(), 30);
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = sbcn(dir.path(), &["simulate", "--mode", "sparse", "--samples", "10", "--out-truth", "t.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--out-data"));
}

#[test]
fn infer_validates_confidence_and_writes_models() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "famafrench", "400");
    let out = sbcn(dir.path(), &["infer", "--data", "d.csv", "--confidence", "1.5", "--bootstrap", "5", "--out-model", "m.json"]);
    assert!(!out.status.success());
    assert!(!dir.path().join("m.json").exists());

    ok(dir.path(), &["infer", "--data", "d.csv", "--bootstrap", "10", "--confidence", "0.5", "--out-model", "m.json", "--out-report", "r.json"]);
    let model = SbcnModel::from_json(&std::fs::read_to_string(dir.path().join("m.json")).unwrap()).unwrap();
    let conf = model.confidence().expect("pruned model carries confidence");
    assert!(conf.values().all(|&c| c >= 0.5));
    assert!(model.dag().edges().all(|(u, v)| model.rank()[u] <= model.rank()[v]));

    ok(dir.path(), &["infer", "--data", "d.csv", "--learner", "bn", "--out-model", "bn.json"]);
    let bn = SbcnModel::from_json(&std::fs::read_to_string(dir.path().join("bn.json")).unwrap()).unwrap();
    assert!(bn.confidence().is_none());
}

#[test]
fn stress_auto_and_manual() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "famafrench", "2000");
    ok(dir.path(), &["infer", "--data", "d.csv", "--out-model", "m.json"]);
    ok(dir.path(), &["--seed", "1", "stress", "--model", "m.json", "--out-scenarios", "s.csv", "--out-tree", "tree.json"]);
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(text.lines().count(), 101);
    assert!(std::fs::read_to_string(dir.path().join("tree.json")).unwrap().contains("\"kind\""));

    ok(dir.path(), &["stress", "--model", "m.json", "--clamp", "SMB=0,Km=0,HML=0,RMW=0,CMA=0", "--count", "20", "--out-scenarios", "x.csv"]);
    let text = std::fs::read_to_string(dir.path().join("x.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("Km,SMB,HML,RMW,CMA"));
    assert!(lines.all(|l| l.starts_with("0,0,0,0,0,")));

    let out = sbcn(dir.path(), &["stress", "--model", "m.json", "--risky-fraction", "0", "--out-scenarios", "y.csv"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("risky"));

    let out = sbcn(dir.path(), &["stress", "--model", "m.json", "--clamp", "Nope=0", "--out-scenarios", "y.csv"]);
    assert!(!out.status.success());
}

#[test]
fn evaluate_prints_one_row() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "famafrench", "1000");
    ok(dir.path(), &["infer", "--data", "d.csv", "--out-model", "m.json"]);
    let out = sbcn(dir.path(), &["evaluate", "--model", "m.json", "--truth", "t.json"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "tp,fp,fn,tn,fp_rate_of_inferred,fn_rate_of_true,fpr,tpr");
    let counts: Vec<usize> = lines[1].split(',').take(4).map(|x| x.parse().unwrap()).collect();
    assert_eq!(counts.iter().sum::<usize>(), 15 * 14);
}

#[test]
fn sweep_writes_csv_and_rejects_incomplete_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"sample_sizes":[100]}"#).unwrap();
    let out = sbcn(dir.path(), &["sweep", "--config", "bad.json", "--out", "s.csv"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    for key in ["criteria", "bootstrap", "learners", "generator", "seed"] {
        assert!(err.contains(key), "{err}");
    }

    std::fs::write(
        dir.path().join("ok.json"),
        r#"{"sample_sizes":[100,200],"criteria":["bic","aic"],"bootstrap":[false,true],"learners":["sbcn"],
            "generator":"famafrench","repetitions":2,"seed":1,"replicates":4}"#,
    )
    .unwrap();
    ok(dir.path(), &["sweep", "--config", "ok.json", "--out", "s.csv", "--out-table", "s.txt"]);
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("learner,criterion,bootstrap,sample_size,fp_rate_of_inferred,fn_rate_of_true,fpr,tpr"));
    assert_eq!(lines.count(), 2 * 2 * 2);
}

#[test]
fn unreadable_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("d.csv"), "a,b\n0,2\n").unwrap();
    let out = sbcn(dir.path(), &["infer", "--data", "d.csv", "--out-model", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2") && err.contains("column 2"), "{err}");
    let out = sbcn(dir.path(), &["infer", "--data", "missing.csv", "--out-model", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
}
