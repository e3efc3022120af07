use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sgrid(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgrid"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn synth(dir: &Path, extra: &[&str]) -> Value {
    let mut args = vec![
        "synth", "--dims", "6", "--size", "300", "--groups", "2,2", "--outliers", "8", "--seed", "4", "--out", "s",
    ];
    args.extend(extra);
    json(&sgrid(dir, &args))
}

#[test]
fn synth_writes_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = synth(dir.path(), &[]);
    assert_eq!(report["command"], "synth");
    assert_eq!(report["outliers"].as_array().unwrap().len(), 8);
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().count(), 300);
    assert!(csv.lines().all(|l| l.split(',').count() == 6));
    let truth = std::fs::read_to_string(dir.path().join("s.truth")).unwrap();
    assert_eq!(truth.lines().filter(|l| !l.trim().is_empty()).count(), 8);
}

#[test]
fn infeasible_synth_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = sgrid(
        dir.path(),
        &["synth", "--dims", "3", "--size", "50", "--groups", "2,2", "--outliers", "1", "--out", "s"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mine_defaults_report() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    let report = json(&sgrid(dir.path(), &["mine", "--data", "s.csv", "--query", "0"]));
    assert_eq!(report["command"], "mine");
    assert_eq!(report["config"]["max_depth"], 5);
    assert_eq!(report["config"]["beam_width"], 100);
    assert_eq!(report["config"]["estimator"], "sgrid");
    assert!(report["timing"]["search_ms"].is_number());
    let subs = report["results"][0]["subspaces"].as_array().unwrap();
    assert!(!subs.is_empty() && subs.len() <= 10);
    let zs: Vec<f64> = subs.iter().map(|s| s["z"].as_f64().unwrap()).collect();
    assert!(zs.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn text_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    let base = ["mine", "--data", "s.csv", "--query", "1,2", "--no-timing", "--depth", "3"];
    let j = json(&sgrid(dir.path(), &base));
    let mut text_args = base.to_vec();
    text_args.extend(["--format", "text"]);
    let text = String::from_utf8(sgrid(dir.path(), &text_args).stdout).unwrap();
    for r in j["results"].as_array().unwrap() {
        assert!(text.contains(&format!("query {}", r["query"])));
        let first = r["subspaces"][0]["subspace"].as_array().unwrap();
        let ids: Vec<String> = first.iter().map(|v| v.to_string()).collect();
        assert!(text.contains(&format!("{{{}}}", ids.join(","))));
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    let out = sgrid(dir.path(), &["mine", "--data", "s.csv", "--query", "3", "--out", "r.json"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(v["results"][0]["query"], 3);
}

#[test]
fn runtime_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    for args in [
        vec!["mine", "--data", "s.csv", "--query", "0", "--depth", "99"],
        vec!["mine", "--data", "s.csv", "--query", "300"],
        vec!["mine", "--data", "missing.csv", "--query", "0"],
        vec!["mine", "--data", "s.csv", "--query", "0", "--block-size", "48"],
    ] {
        let out = sgrid(dir.path(), &args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["mine", "--data", "s.csv"],
        vec!["mine", "--data", "s.csv", "--query", "x"],
        vec!["mine", "--data", "s.csv", "--query", "0", "--estimator", "lof"],
        vec!["frobnicate"],
    ] {
        assert_eq!(sgrid(dir.path(), &args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn eval_reports_match_totals() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    let report = json(&sgrid(
        dir.path(),
        &["eval", "--data", "s.csv", "--truth", "s.truth", "--depth", "3", "--no-timing"],
    ));
    assert_eq!(report["matches"]["queries"], 8);
    let exact = report["matches"]["exact_matches"].as_f64().unwrap();
    let any = report["matches"]["matches"].as_f64().unwrap();
    assert!(exact <= any && any <= 8.0);
}

#[test]
fn eval_with_empty_truth_reports_zeros() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    std::fs::write(dir.path().join("empty.truth"), "").unwrap();
    let report = json(&sgrid(
        dir.path(),
        &["eval", "--data", "s.csv", "--truth", "empty.truth", "--depth", "3"],
    ));
    assert_eq!(report["matches"]["queries"], 0);
    assert_eq!(report["exact_rate"], 0.0);
}

#[test]
fn eval_rejects_mismatched_truth() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    std::fs::write(dir.path().join("bad.truth"), "5000: {0,1}\n").unwrap();
    let out = sgrid(dir.path(), &["eval", "--data", "s.csv", "--truth", "bad.truth"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(dir.path().join("bad.truth"), "5: {0,9}\n").unwrap();
    let out = sgrid(dir.path(), &["eval", "--data", "s.csv", "--truth", "bad.truth"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bench_prints_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    let out = sgrid(
        dir.path(),
        &["bench", "--data", "s.csv", "--estimators", "sgrid,grid", "--queries", "3", "--repeat", "3"],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "estimator,n,d,depth,queries,build_ms,search_ms,subspaces_scored");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("sgrid: search_ms mean") && stderr.contains("sd"));
}

#[test]
fn jobs_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), &[]);
    let run = |jobs: &str| {
        let mut v = json(&sgrid(
            dir.path(),
            &["mine", "--data", "s.csv", "--query", "0,1,2,3,4,5", "--depth", "3", "--no-timing", "--jobs", jobs],
        ));
        v["results"].take()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn header_row_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("a,b,c\n");
    for i in 0..40 {
        csv.push_str(&format!("{},{},{}\n", i, (i * 7) % 13, (i * 3) % 5));
    }
    std::fs::write(dir.path().join("h.csv"), csv).unwrap();
    let report = json(&sgrid(
        dir.path(),
        &["mine", "--data", "h.csv", "--header", "--query", "0", "--depth", "2"],
    ));
    assert_eq!(report["data"]["n"], 40);
    let out = sgrid(dir.path(), &["mine", "--data", "h.csv", "--query", "0", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kde_completes_on_small_wide_data_and_sgrid_is_faster() {
    let dir = tempfile::tempdir().unwrap();
    json(&sgrid(
        dir.path(),
        &["synth", "--dims", "20", "--size", "220", "--groups", "2,2,3", "--outliers", "5", "--seed", "1", "--out", "w"],
    ));
    let elapsed = |est: &str| {
        let r = json(&sgrid(dir.path(), &["mine", "--data", "w.csv", "--query", "0", "--estimator", est]));
        assert_eq!(r["results"][0]["subspaces"].as_array().unwrap().len(), 10);
        r["timing"]["build_ms"].as_f64().unwrap() + r["timing"]["search_ms"].as_f64().unwrap()
    };
    assert!(elapsed("sgrid") < elapsed("kde"));
}
