use std::io::Write;
use std::process::{Command, Output, Stdio};

fn piexp(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_piexp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn golden(name: &str, args: &[&str]) {
    let want = std::fs::read_to_string(format!("{}/tests/golden/{name}.txt", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let out = piexp(args, "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{name}");
}

#[test]
fn goldens() {
    golden("analyze_p2", &["analyze", "-p", "2", "-D", "2", "pi(0)*T", "--format", "machine"]);
    golden("reduce_dwork", &["reduce", "-p", "2", "pi(0)*T^2", "--format", "machine"]);
    golden("index_large_p", &["index", "-p", "5", "pi(0)*T + pi(0)*T^2 + pi(0)*T^3", "--format", "machine"]);
    golden("witt_p3", &["witt", "-p", "3", "-D", "6", "pi(0)*T + pi(0)*T^2", "--format", "machine"]);
    golden("lift_p3", &["lift", "-p", "3", "1 + 2*T + T^3", "--format", "machine"]);
}

#[test]
fn deterministic_across_runs() {
    let args = ["analyze", "-p", "3", "-D", "7", "pi(1)*T - 1/3*pi(0)*T^3 + 2*pi(1)*T^7", "--probe", "--format", "machine"];
    let a = piexp(&args, "");
    let b = piexp(&args, "");
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn exit_code_contract() {
    let code = |args: &[&str]| piexp(args, "").status.code();
    assert_eq!(code(&["index", "-p", "2", "pi(0)*T"]), Some(0));
    assert_eq!(code(&["index", "-p", "2", "pi(0)*T +"]), Some(2));
    assert_eq!(code(&["index", "-p", "6", "T"]), Some(2));
    assert_eq!(code(&["index", "-p", "2", "-D", "1", "T^2"]), Some(2));
    assert_eq!(code(&["index", "-p", "2", "1 + T"]), Some(2));
    assert_eq!(code(&["index", "-p", "2", "pi(3)*T"]), Some(2));
    assert_eq!(code(&["index", "-p", "2", "T"]), Some(3));
    assert_eq!(code(&["witt", "-p", "3", "T"]), Some(3));
    assert_eq!(code(&["analyze", "-p", "2", "T"]), Some(0));
    assert_eq!(code(&["nonsense"]), Some(2));
}

#[test]
fn parse_errors_carry_positions() {
    let out = piexp(&["index", "-p", "3"], "# header\n\npi(0)*T + *\n");
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn stdin_batch_equiv() {
    let out = piexp(&["equiv", "-p", "2", "--format", "machine"], "pi(0)*T^2\npi(0)*T\n");
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("equivalent=true"));
}
