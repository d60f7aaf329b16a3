use std::process::{Command, Output};

use serde_json::Value;

fn cdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdiff")).args(args).output().expect("run cdiff")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = cdiff(&full);
    let code = out.status.code().expect("exit code");
    let value =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (value, code)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn field_shows_default_modulus() {
    let out = cdiff(&["field", "--field", "2,3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("X^3 + X^2 + 1"));
    let (v, code) = json(&["field", "--field", "2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 8);
    assert_eq!(v["field"], "2,3,1,0,1,1");
}

#[test]
fn explicit_modulus_is_used() {
    let (v, _) = json(&["field", "--field", "2,3,1,1,0,1"]);
    assert_eq!(v["modulus"], "X^3 + X + 1");
}

#[test]
fn func_reports_bijectivity() {
    let (v, code) = json(&["func", "--field", "2,3", "--func", "X^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["permutation"], true);
    // gcd(3, 4^1 - 1) = 3, so X^3 collides on GF(4)
    let (v, _) = json(&["func", "--field", "2,2", "--func", "X^3", "--values"]);
    assert_eq!(v["permutation"], false);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 4);
    assert_eq!(values[0], "0");
    assert!(values[1..].iter().all(|y| y == "1"));
}

#[test]
fn cubic_root_counts_add_up() {
    // sum over a != 0 of #{x : x^3 + x = a} = 8 - #{x : x^3 = x} = 6
    let (v, code) = json(&["cubic", "--field", "2,3"]);
    assert_eq!(code, 0);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 7);
    let total: u64 = rows.iter().map(|r| r["root_count"].as_u64().unwrap()).sum();
    assert_eq!(total, 6);
    let (v, _) = json(&["cubic", "--field", "2,3", "--a", "1"]);
    assert_eq!(v[0]["root_count"], 3);
}

#[test]
fn walsh_spectrum_obeys_parseval() {
    let (v, code) = json(&["walsh", "--field", "2,3", "--func", "Tr(X^3)"]);
    assert_eq!(code, 0);
    let squares: Vec<i64> = v.as_array().unwrap().iter().map(|r| r["squared_magnitude"].as_i64().unwrap()).collect();
    assert_eq!(squares.len(), 8);
    assert_eq!(squares.iter().sum::<i64>(), 64);
    assert!(squares.iter().all(|&s| s == 0 || s == 16));
}

#[test]
fn cdu_classifies_apn() {
    let (v, code) = json(&["cdu", "--field", "2,3", "--func", "X^3", "--c", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["uniformity"], 2);
    assert_eq!(v[0]["class"], "almost_perfect");
    assert_eq!(v[0]["excluded_a0"], true);
    let (v, _) = json(&["cdu", "--field", "2,4", "--func", "X^3", "--c", "subfield:2"]);
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn cdu_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = cdiff(&["cdu", "--field", "2,4", "--func", "X^3", "--c", "1", "--csv", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,a,b,count"));
    let rows: Vec<Vec<u32>> = lines.map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
    // a = 0 is excluded at c = 1
    assert_eq!(rows.len(), 15 * 16);
    let mut per_a = [0u32; 16];
    for r in &rows {
        assert_eq!(r[0], 1);
        per_a[r[1] as usize] += r[3];
    }
    assert_eq!(per_a[0], 0);
    assert!(per_a[1..].iter().all(|&s| s == 16));
}

#[test]
fn family_build_reports_conditions() {
    let (v, code) = json(&["family", "build", "--id", "zh31", "--m", "2", "--delta", "g^5"]);
    assert_eq!(code, 0);
    assert_eq!(v["qualifies"], true);
    assert_eq!(v["permutation"], true);
    assert_eq!(v["preconditions"].as_array().unwrap().len(), 3);
    let (v, _) = json(&["family", "build", "--id", "lwc8", "--m", "2", "--delta", "g"]);
    assert_eq!(v["preconditions"][0]["name"], "relative_trace_zero");
}

#[test]
fn verify_exit_status_follows_verdict() {
    let (v, code) = json(&["verify", "--id", "zh31", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert!(v.get("runtime_ms").is_none());
    let (v, _) = json(&["verify", "--id", "zh21", "--m", "2", "--timings"]);
    assert!(v["runtime_ms"].is_u64());
    // the characteristic-3 family has failing cells at trace-zero delta
    let (v, code) = json(&["verify", "--id", "lwc10", "--m", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn text_report_names_failures() {
    let out = cdiff(&["verify", "--id", "lwc10", "--m", "1"]);
    let text = stdout(&out);
    assert!(text.contains("FAIL"));
    assert!(text.contains("first failure"));
}

#[test]
fn bad_input_exits_with_2() {
    for args in [
        &["field"][..],
        &["field", "--field", "4,2"],
        &["func", "--field", "2,3", "--func", "X^^3"],
        &["verify", "--id", "nope", "--m", "2"],
        &["verify", "--id", "zh21", "--m", "3"],
        &["run-all", "--profile", "slow"],
        &["field", "--field", "2,3", "--field", "2,4"],
        &["field", "--field", "2,3", "--csv", "x.csv"],
    ] {
        let out = cdiff(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn thread_count_is_accepted() {
    let out = cdiff(&["--threads", "2", "cdu", "--field", "2,5", "--func", "X^5", "--c", "1"]);
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_cdiff"))
        .args(["cdu", "--field", "2,5", "--func", "X^5", "--c", "1"])
        .env("CDIFF_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn run_all_respects_field_lines() {
    let (v, _) = json(&["run-all", "--field", "2,4,1,1,0,0,1"]);
    let reports = v["reports"].as_array().unwrap();
    let gf16: Vec<&Value> = reports.iter().filter(|r| r["field"].as_str().unwrap().starts_with("2,4,")).collect();
    assert!(!gf16.is_empty());
    assert!(gf16.iter().all(|r| r["modulus"] == "X^4 + X + 1"));
}
