use std::process::{Command, Output};

fn qhash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhash"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = qhash(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("single JSON document")
}

#[test]
fn cm_reports_decimal_strings() {
    let v = json(&["cm", "--group", "z5", "--json"]);
    assert_eq!(v["cm"], "15");
    assert_eq!(v["group"], "z5");
}

#[test]
fn infeasible_work_exits_with_two() {
    let out = qhash(&["count", "--code", "sum:z9", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(qhash(&["--bogus"]).status.code(), Some(1));
    assert_eq!(qhash(&["cm", "--group", "q7"]).status.code(), Some(1));
    assert_eq!(
        qhash(&["--threads", "0", "cm", "--group", "z3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qhash(&["--help"]).status.code(), Some(0));
}

#[test]
fn table2_has_one_row_per_alphabet() {
    let v = json(&["table2", "--json"]);
    let qs: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["q"].as_u64().unwrap())
        .collect();
    assert_eq!(qs, [4, 5, 7, 8, 9, 11]);
}

#[test]
fn count_and_beats_agree_on_the_ternary_code() {
    let count = json(&["count", "--code", "fourcol:z3", "--json"]);
    assert_eq!(count["s_count"], "84");
    let beats = json(&["beats", "--code", "fourcol:z3", "--json"]);
    assert_eq!(beats["certificate"]["beats"], true);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |t: &str| {
        let out = qhash(&["--threads", t, "--json", "table1", "--max-q", "11"]);
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
    let mc = |t: &str| {
        qhash(&[
            "--threads",
            t,
            "--json",
            "--seed",
            "7",
            "mc",
            "--m",
            "8",
            "--q",
            "3",
            "--N",
            "2",
            "--M",
            "3",
        ])
        .stdout
    };
    assert_eq!(mc("1"), mc("4"));
}

#[test]
fn exported_codes_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    let p = path.to_str().unwrap();
    assert!(qhash(&["export", "--code", "mds52f4", "--out", p])
        .status
        .success());
    let a = json(&["count", "--code", "mds52f4", "--method", "brute", "--json"]);
    let b = json(&[
        "count",
        "--code",
        &format!("file:{p}"),
        "--method",
        "brute",
        "--json",
    ]);
    assert_eq!(a["s_count"], b["s_count"]);
}

#[test]
fn repro_manifest_lists_requested_checks() {
    let v = json(&["repro", "--only", "1", "--only", "4", "--json"]);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(v["all_pass"], true);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("qhash.json");
    std::fs::write(&path, r#"{"json": true, "max_subsets": 10}"#).unwrap();
    let p = path.to_str().unwrap();
    let out = qhash(&[
        "--config",
        p,
        "count",
        "--code",
        "fourcol:z3",
        "--method",
        "brute",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&[
        "--config",
        p,
        "--max-subsets",
        "1000",
        "count",
        "--code",
        "fourcol:z3",
        "--method",
        "brute",
    ]);
    assert_eq!(v["s_count"], "84");
    std::fs::write(&path, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(
        qhash(&["--config", p, "cm", "--group", "z3"]).status.code(),
        Some(1)
    );
}
