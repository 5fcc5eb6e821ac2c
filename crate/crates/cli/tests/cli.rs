use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qelim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qelim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn decide_examples() {
    let o = qelim(&["decide", "--theory", "q-mul", "exists x. x*x = 2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "false");
    let o = qelim(&["decide", "--theory", "r-mul", "exists x. x*x = 2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true");
}

#[test]
fn qe_example_and_json() {
    let o = qelim(&["qe", "--theory", "dlo", "exists x. y < x & x < z"]);
    assert_eq!(stdout(&o), "y < z");
    let o = qelim(&["--format", "json", "qe", "--theory", "z-order", "exists x. y < x & x < z"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["text"], "s(y) < z");
}

#[test]
fn formula_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qelim"))
        .args(["qe", "--theory", "z-add", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"exists x. x + x = y\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(stdout(&o), "cong(y, 0, 2)");
}

#[test]
fn exit_codes() {
    // usage: unknown subcommand, bad theory, syntax and signature errors
    assert_eq!(qelim(&["bogus"]).status.code(), Some(2));
    assert_eq!(qelim(&["qe", "--theory", "c-add", "x < y"]).status.code(), Some(2));
    let o = qelim(&["qe", "--theory", "dlo", "exists x. y < x + 1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("not in the signature") && err.contains('^'), "{err}");
    assert_eq!(qelim(&["decide", "--theory", "dlo", "exists x. y < x"]).status.code(), Some(2));
    // engine: DNF limit exceeded
    let o = qelim(&[
        "--dnf-limit",
        "3",
        "qe",
        "--theory",
        "z-add",
        "exists x. (x < y | x < z) & (w < x | cong(x, 0, 3)) & (y < x | x = 2 * z)",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_reports() {
    let o = qelim(&["check", "--theory", "z-add", "--samples", "40", "--seed", "7", "exists x. x + x = y"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("fail 0"), "{}", stdout(&o));
    let o = qelim(&[
        "--format", "json", "check", "--theory", "dlo", "--samples", "20", "exists x. y < x & x < z",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["samples"], 20);
    assert_eq!(v["report"]["fail"].as_array().unwrap().len(), 0);
}

#[test]
fn lab_and_identity() {
    let o = qelim(&["lab", "QDivNFact(3)", "--claim", "divisible_by(5)", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("fails at 1"), "{}", stdout(&o));
    let o = qelim(&["lab", "QDivNFact(3)", "--member", "5/36"]);
    assert_eq!(stdout(&o), "true");
    let o = qelim(&["lab", "QDivNFact(3)", "--member", "(1, 2)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qelim(&["lab", "LexGroup(3)", "--claim", "all_elements_are_pth_powers"]);
    assert_eq!(o.status.code(), Some(2));

    let o = qelim(&["identity", "four-square-Z", "--range", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("7 = (2)² + (1)² + (1)² + (1)²"));
    let o = qelim(&["--format", "json", "identity", "robinson-variant-Z", "--range", "6"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exceptions"].as_array().unwrap().len(), 0);
}
