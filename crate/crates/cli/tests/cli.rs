use std::io::Write;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;

use gorecone_core::semigroup::CurveSpec;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gorecone"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn worked_example_text() {
    let o = run(&["analyze", "416", "577", "646", "744"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("case 1b"));
    assert!(s.contains("x4>x2>x3>x1"));
    assert!(s.contains("f6 = x3^15 - x1^8*x2^2*x4^7"));
    assert!(s.contains("I(C)* minimally generated by 7"));
    assert!(s.contains("COUNT_MATCH_SET_MISMATCH"));
    assert!(s.contains("with the recorded erratum: MATCH"));
}

#[test]
fn worked_example_json() {
    let o = run(&["analyze", "416", "577", "646", "744", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tangent_cone"]["minimal_count"], 7);
    assert_eq!(v["basis"]["elements"].as_array().unwrap().len(), 7);
    assert!(v["timings"].is_null());
    let again = run(&["analyze", "416", "577", "646", "744", "--json"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn invalid_curves_exit_2() {
    let o = run(&["analyze", "10", "12", "14", "16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid curve: gcd ≠ 1 (gcd = 2)"));
    assert_eq!(run(&["analyze", "5", "4", "7", "9"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "1", "2", "3"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "5", "6", "7", "9", "--order", "degrevlex x4,x3,x2,x1"]).status.code(), Some(2));
}

#[test]
fn budgets_exit_3() {
    let o = bin().args(["analyze", "416", "577", "646", "744"]).env("GORECONE_BUDGET", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
    let o = run(&["analyze", "416", "577", "646", "744", "--bound", "1000"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn non_gorenstein_curves_are_reported() {
    let o = run(&["analyze", "5", "6", "7", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not analyzed"));
}

#[test]
fn corpus_is_seeded() {
    let a = run(&["gen-corpus", "--seed", "4", "--count", "6"]);
    let b = run(&["gen-corpus", "--seed", "4", "--count", "6"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<String> = stdout(&a).lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect();
    assert_eq!(lines.len(), 6);
    let c = run(&["gen-corpus", "--seed", "4", "--count", "3", "--case", "2b"]);
    assert!(stdout(&c).lines().filter(|l| !l.starts_with('#')).all(|l| l.contains("# case 2b")));
    assert_eq!(run(&["gen-corpus", "--seed", "4", "--count", "0"]).status.code(), Some(2));
}

#[test]
fn suite_from_stdin_and_file() {
    let corpus = stdout(&run(&["gen-corpus", "--seed", "8", "--count", "12"]));
    let o = run_stdin(&["run-suite", "--jobs", "3"], &corpus);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.contains("12 curves"));
    assert!(s.contains("source"));

    let path = std::env::temp_dir().join(format!("gorecone-suite-{}.txt", std::process::id()));
    std::fs::write(&path, &corpus).unwrap();
    let one = run(&["run-suite", "--corpus", path.to_str().unwrap(), "--json"]);
    let four = run(&["run-suite", "--corpus", path.to_str().unwrap(), "--json", "--jobs", "4"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(one.stdout, four.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn empty_suite_is_a_usage_error() {
    assert_eq!(run_stdin(&["run-suite"], "# nothing\n\n").status.code(), Some(2));
    assert_eq!(run_stdin(&["run-suite"], "1 2 three 4\n").status.code(), Some(2));
    assert_eq!(run(&["run-suite", "--corpus", "/nonexistent/corpus.txt"]).status.code(), Some(2));
}

#[test]
fn suite_reports_budget_errors_with_exit_3() {
    let o = bin()
        .args(["run-suite"])
        .env("GORECONE_BUDGET", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(b"416 577 646 744\n")?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exit_codes_follow_the_contract(n in prop::array::uniform4(1u64..40)) {
        let args: Vec<String> = n.iter().map(u64::to_string).collect();
        let mut cmd = vec!["analyze"];
        cmd.extend(args.iter().map(String::as_str));
        let code = run(&cmd).status.code().unwrap();
        match CurveSpec::new(n) {
            Err(_) => prop_assert_eq!(code, 2),
            Ok(_) => prop_assert!(code == 0 || code == 3, "exit {code} for {n:?}"),
        }
    }
}
