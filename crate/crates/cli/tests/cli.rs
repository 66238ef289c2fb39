use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altlink")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_reports_verdicts() {
    let o = run(&["classify", "(2 1,3) 1 1 (2 1,3)", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["amphicheiral"], true);
    assert_eq!(v["verdict"]["dh_link"], true);
    assert_eq!(v["verdict"]["minimal_diagrams"], 4);

    let o = run(&["classify", ".(2,3).(2,3)", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"]["amphicheiral"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["classify", "not a tangle"])), 2);
    assert_eq!(code(&run(&["classify", "3*1.1.1"])), 2);
    assert_eq!(code(&run(&["classify", "--", "2 -1"])), 3);
    // a curl is not reduced, two trefoils are not prime, the 0 closure splits
    assert_eq!(code(&run(&["classify", "3 0"])), 3);
    assert_eq!(code(&run(&["classify", "(3,3) 0"])), 3);
    assert_eq!(code(&run(&["classify", "0"])), 3);
    assert_eq!(code(&run(&["orbit", "(2 1,3) 1 1 (2 1,3)", "--max-orbit", "3"])), 4);
    assert_eq!(code(&run(&["classify", "3", "--max-orbit", "0"])), 2);
    assert_eq!(code(&run(&["classify", "3", "--format", "dot"])), 2);
}

#[test]
fn orbit_entry_counts() {
    for (s, n) in [("(2 1,3) 1 1 (2 1,3)", 4), ("6*(2 1,2) 1.(2,2 1) 1", 16), (".(2,3).(3,2)", 1)] {
        let o = run(&["orbit", s, "--format", "json"]);
        assert_eq!(code(&o), 0, "{s}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v.as_array().unwrap().len(), n, "{s}");
    }
}

#[test]
fn graphs_of_whole_orbit_go_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = run(&["graphs", "(2 1,3) 1 1 (2 1,3)", "--which", "all-orbit", "--format", "dot", "--out-dir", d]);
    assert_eq!(code(&o), 0);
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 8);

    let o = run(&["graphs", "unknot", "--which", "g", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches(';').count(), 1);
}

#[test]
fn scan_family_and_empty_range() {
    let o = run(&["scan", "--pretzel", "p 1,2", "--p", "2..4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scoreboard"]["instances"], 3);
    assert_eq!(v["scoreboard"]["agrees"], 3);

    let o = run(&["scan", "--pretzel", "p 1,2", "--p", "4..2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["scoreboard"]["instances"], 0);
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = run(&["verify-fixtures", "--format", "json", "--threads", "1"]);
    let b = run(&["verify", "--format", "json", "--threads", "3"]);
    let c = run(&["verify-fixtures", "--format", "json", "--threads", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn verify_negative_control_fails() {
    let o = run(&["verify-fixtures", "--iso-mode", "embedded"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}
