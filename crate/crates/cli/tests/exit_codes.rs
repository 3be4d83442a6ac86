use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sphdim")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bogus"]).0, 1);
    let (code, stdout, stderr) = run(&["dims", "/nonexistent/class.txt"]);
    assert_eq!(code, 1);
    assert!(stdout.is_empty());
    assert!(stderr.contains("/nonexistent/class.txt"));
}

#[test]
fn caps_and_budgets_exit_three() {
    assert_eq!(run(&["report", "@cube:3", "--max-domain", "2"]).0, 3);
    assert_eq!(run(&["extremal", "@cube:4", "--collapse-budget", "1"]).0, 3);
}

#[test]
fn malformed_class_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dup.txt");
    std::fs::write(&p, "+-\n+-\n").unwrap();
    let (code, _, stderr) = run(&["dims", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("duplicate"));
}

#[test]
fn family_threshold_has_four_rows() {
    let (code, stdout, _) = run(&["family", "threshold", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "---\n+--\n++-\n+++\n");
}

#[test]
fn class_files_round_trip_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c3.json");
    assert_eq!(run(&["--json", "family", "cube", "3", "-o", p.to_str().unwrap()]).0, 0);
    let (code, stdout, _) = run(&["report", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("class          c3"));
    assert!(stdout.contains("sd             2  "));
}
