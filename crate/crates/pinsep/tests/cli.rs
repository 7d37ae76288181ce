use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use pinsep::cli::{Payload, Report};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(format!("{name}.pinsep"))
}

fn pinsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinsep")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pinsep"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn false_verdicts_exit_zero() {
    let f = corpus("exponent_one_counterexample");
    let o = pinsep(&["classify", f.to_str().unwrap(), "--leg", "B:C", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    let Payload::Classify(c) = &r.result else {
        panic!("classify payload")
    };
    assert!(c.purely_inseparable.verdict.is_false());
    assert_eq!(c.fiber.as_ref().unwrap().fiber_dim, 3);
}

#[test]
fn reports_are_byte_identical_and_round_trip() {
    let f = corpus("pbasis_truncated_line");
    for cmd in ["classify", "jb", "diff"] {
        let a = pinsep(&[cmd, f.to_str().unwrap(), "--format", "json"]);
        let b = pinsep(&[cmd, f.to_str().unwrap(), "--format", "json"]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let text = stdout(&a);
        let r = Report::from_json(&text).unwrap();
        assert_eq!(r.to_json() + "\n", text);
        assert_eq!(r.command, cmd);
        assert!(r.timing_us.is_none());
    }
    let t = pinsep(&["classify", f.to_str().unwrap(), "--format", "json", "--timing"]);
    assert!(Report::from_json(&stdout(&t)).unwrap().timing_us.is_some());
}

#[test]
fn parse_errors_exit_two_with_position() {
    let o = with_stdin(&["classify", "-"], "p = 3\n[algebra]\nx^3 = y\ny^3 = 0\n");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 7"), "{err}");
}

#[test]
fn precondition_and_resource_errors_exit_three() {
    let o = with_stdin(&["tower", "-"], "p = 2\n[algebra]\nx^2 = 0\n");
    assert_eq!(o.status.code(), Some(3));
    let o = with_stdin(&["classify", "-", "--max-dim", "4"], "p = 2\n[algebra]\nx^8 = 0\n");
    assert_eq!(o.status.code(), Some(3));
    let mut child = Command::new(env!("CARGO_BIN_EXE_pinsep"))
        .args(["classify", "-"])
        .env("PINSEP_MAX_DIM", "4")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"p = 2\n[algebra]\nx^8 = 0\n")
        .unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(3));
    let o = with_stdin(&["diff", "-", "--order", "40"], "p = 2\n[algebra]\nx^2 = 0\n");
    assert_eq!(o.status.code(), Some(3));
    let o = with_stdin(
        &["diff", "-", "--order", "40", "--force"],
        "p = 2\n[algebra]\nx^2 = 0\n",
    );
    assert_eq!(o.status.code(), Some(0));
    let o = pinsep(&["classify", "/nonexistent/file.pinsep"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn selftest_on_a_broken_table_exits_one() {
    let dir = std::env::temp_dir().join(format!("pinsep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.pinsep");
    std::fs::write(
        &path,
        "p = 2\n[algebra]\nbasis = one, x, y\nunit = one\none*one = one\none*x = x\none*y = y\nx*x = y\ny*y = y\n",
    )
    .unwrap();
    let o = pinsep(&["selftest", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("associativity failure"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn selftest_filter() {
    let o = pinsep(&["selftest", "--filter", "tower", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    let Payload::Selftest(s) = &r.result else {
        panic!("selftest payload")
    };
    assert!(s.cases.iter().all(|c| c.property.starts_with("tower")));
    assert!(s.cases.len() >= 3);
    assert_eq!(s.failed, 0);
    let o = pinsep(&["selftest", "--filter", "bogus"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn diff_text_output() {
    let o = with_stdin(&["diff", "-", "--order", "2"], "p = 3\n[algebra]\nx^3 = 0\n");
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("[3, 6, 9]"), "{s}");
}
