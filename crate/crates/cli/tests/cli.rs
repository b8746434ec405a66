use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn isofam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isofam"))
        .args(args)
        .env_remove("ISOFAM_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn enumerate_quotient_five() {
    let o = isofam(&["enumerate", "--case", "c", "--n", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 16);
    for line in text.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["B"].is_array() && v["eps"].is_u64() && v["dim"].is_u64());
    }
}

#[test]
fn verify_cycle_seven_passes() {
    let o = isofam(&["verify", "--case", "b", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["families"], 64);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"perfect.bijection") && ids.contains(&"affine.pi0"));
}

#[test]
fn fourier_compare_reports_mismatches_as_warnings() {
    let o = isofam(&["fourier", "--n", "7", "--compare-paper"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cmp = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "fourier.printed_table")
        .unwrap();
    assert_eq!(cmp["informational"], true);
    let rows = cmp["detail"]["rows"].as_array().unwrap();
    let printed: Vec<i64> = rows.iter().map(|r| r["printed"].as_i64().unwrap()).collect();
    assert_eq!(printed, vec![1, 0, 1, -1, -1, 0, 1, -2, 8]);
    assert_eq!(cmp["detail"]["column_sum"], 1);
    assert_eq!(v["orbitSizes"], serde_json::json!([1, 7, 7, 7, 7, 7, 7, 7, 14]));
    assert!(stderr(&o).contains(r#""level":"warning""#));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["fourier", "--case", "a", "--n", "5"],
        vec!["verify", "--n", "4"],
        vec!["omega", "--n", "7", "--edge", "1,3"],
        vec!["sectors", "--n", "7", "--j", "1,2,3"],
        vec!["sectors", "--n", "7", "--tau", "2"],
        vec!["enumerate", "--n", "5", "--format", "dot"],
        vec!["verify", "--n", "5", "--compare-paper"],
        vec!["verify", "--case", "z", "--n", "5"],
        vec!["verify"],
    ] {
        let o = isofam(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = isofam(&["fourier", "--case", "a", "--n", "5"]);
    let diag: Value = serde_json::from_str(stderr(&o).lines().next().unwrap()).unwrap();
    assert_eq!(diag["level"], "error");
}

#[test]
fn verification_failure_exits_one() {
    // a cache whose families are valid but incomplete passes parsing and
    // then fails the cardinality and bijection checks
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi-c-5.jsonl");
    fs::write(
        &path,
        "{\"schema\":\"isofam-phi/1\",\"case\":\"c\",\"n\":5,\"records\":2}\n{\"B\":[],\"eps\":0,\"dim\":0}\n{\"B\":[[1]],\"eps\":1,\"dim\":1}\n",
    )
    .unwrap();
    let o = isofam(&["verify", "--n", "5", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let errors: Vec<Value> = stderr(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .filter(|v: &Value| v["level"] == "error")
        .collect();
    assert!(errors.iter().any(|e| e["check"] == "families.cardinality"));
}

fn records_in(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = isofam(&["verify", "--n", "7", "--cache-dir", d]);
    let path = dir.path().join("phi-c-7.jsonl");
    assert!(path.exists());
    assert_eq!(records_in(&path), 64);
    let stored = fs::read(&path).unwrap();
    let second = isofam(&["verify", "--n", "7", "--cache-dir", d]);
    assert_eq!(first.stdout, second.stdout);
    assert!(second.stderr.is_empty());
    assert_eq!(fs::read(&path).unwrap(), stored);

    let o = Command::new(env!("CARGO_BIN_EXE_isofam"))
        .args(["order", "--n", "7"])
        .env("ISOFAM_CACHE", d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
}

#[test]
fn stale_or_corrupt_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let clean = isofam(&["verify", "--n", "5"]);
    let path = dir.path().join("phi-c-5.jsonl");
    for bad in [
        "not json at all\n".to_string(),
        "{\"schema\":\"isofam-phi/0\",\"case\":\"c\",\"n\":5,\"records\":16}\n".to_string(),
        "{\"schema\":\"isofam-phi/1\",\"case\":\"c\",\"n\":5,\"records\":1}\n{\"B\":[[1]],\"eps\":2,\"dim\":1}\n"
            .to_string(),
    ] {
        fs::write(&path, bad).unwrap();
        let o = isofam(&["verify", "--n", "5", "--cache-dir", d]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stderr(&o).contains("recomputing"), "{}", stderr(&o));
        assert_eq!(o.stdout, clean.stdout);
        assert_eq!(records_in(&path), 16);
    }
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["order", "--case", "a", "--n", "7", "--format", "dot"],
        vec!["fourier", "--n", "7", "--format", "csv"],
        vec!["omega", "--n", "7", "--edge", "3,4"],
        vec!["sectors", "--n", "7", "--format", "json"],
        vec!["verify", "--case", "even", "--n", "6", "--format", "text"],
    ] {
        let a = isofam(&args);
        let b = isofam(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_writes_the_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("omega.jsonl");
    let o = isofam(&["omega", "--n", "5", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.starts_with(r#"{"B":[],"lifted":[],"epsPrime":0,"n":0,"sign":"+","sector":null}"#));
}

#[test]
fn sectors_report_shape() {
    let o = isofam(&["sectors", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["J"], serde_json::json!([1, 2]));
    assert_eq!(v["preferredTau"], 4);
    let tables = v["tables"].as_array().unwrap();
    assert_eq!(tables.len(), 4);
    for t in tables {
        assert_eq!(t["entries"].as_array().unwrap().len(), 4);
    }
    let csv = stdout(&isofam(&["sectors", "--n", "5", "--format", "csv"]));
    assert_eq!(csv.lines().next(), Some("sign,tau,y,members"));
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn every_check_id_is_reachable_from_the_cli() {
    let mut seen = BTreeSet::new();
    for (command, case, n) in [
        ("verify", "a", "5"),
        ("verify", "b", "5"),
        ("verify", "c", "5"),
        ("verify", "even", "6"),
        ("order", "b", "5"),
        ("order", "c", "5"),
        ("omega", "c", "5"),
        ("sectors", "c", "5"),
        ("fourier", "c", "5"),
    ] {
        let o = isofam(&[command, "--case", case, "--n", n]);
        assert_eq!(o.status.code(), Some(0), "{command} {case}: {}", stderr(&o));
        if command == "omega" {
            // the JSON artifact is one line per record; the text form lists the checks
            let t = stdout(&isofam(&[command, "--case", case, "--n", n, "--format", "text"]));
            for line in t.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")) {
                seen.insert(line.split_whitespace().nth(1).unwrap().to_string());
            }
            continue;
        }
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        for c in v["checks"].as_array().unwrap() {
            seen.insert(c["id"].as_str().unwrap().to_string());
        }
    }
    let all: BTreeSet<String> = isofam::checks::all_check_ids().iter().map(|s| s.to_string()).collect();
    let missing: Vec<_> = all.difference(&seen).collect();
    assert!(missing.is_empty(), "unreachable checks: {missing:?}");
}
