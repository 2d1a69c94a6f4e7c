use std::path::PathBuf;
use std::process::{Command, Output};

fn quiver(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../quivers").join(name)
}

fn qsemi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsemi")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("gens.txt");
    let q = quiver("bilinear1.json");
    let q = q.to_str().unwrap();
    let o = qsemi(&["generate", q, "--degrees", "t:;r:;s:2", "--all", "--out", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("qsemi-generators v1\n"));
    assert!(text.contains("generators 3 complete"));
    let o = qsemi(&["verify", q, report.to_str().unwrap(), "--seed", "7", "--samples", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches(": ok").count(), 3);
}

#[test]
fn tampered_report_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("gens.txt");
    let q = quiver("one_of_each.json");
    let q = q.to_str().unwrap();
    let o = qsemi(&["generate", q, "--degrees", "t:2;r:0;s:0", "--all", "--out", report.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&report).unwrap();
    let poly_line = text.lines().find(|l| l.starts_with("poly ")).unwrap();
    std::fs::write(&report, text.replace(poly_line, "poly x[1][1][1] * x[1][2][2]")).unwrap();
    let o = qsemi(&["verify", q, report.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn explicit_quintuple() {
    let q = quiver("one_of_each.json");
    let o = qsemi(&["generate", q.to_str().unwrap(), "--degrees", "t:2;r:0;s:0", "--a", "({1,2})", "--b", "({1,2})"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("poly x[1][1][1] * x[1][2][2] - x[1][1][2] * x[1][2][1]"));
    let o = qsemi(&["generate", q.to_str().unwrap(), "--degrees", "t:2;r:0;s:0", "--a", "({1},{2})", "--b", "({1,2})"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reduction_writes_a_zigzag_quiver() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("target.json");
    let o = qsemi(&["reduce", quiver("two_loops.json").to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("a4 type 3"));
    let o = qsemi(&["validate", target.to_str().unwrap()]);
    assert!(stdout(&o).starts_with("valid zigzag quiver"));
    let o = qsemi(&["admissible", target.to_str().unwrap(), "--degrees", "t:1,0,0;r:0;s:0"]);
    assert!(o.status.success());
}

#[test]
fn spanning_and_oracle() {
    let q = quiver("bilinear2.json");
    let q = q.to_str().unwrap();
    let o = qsemi(&["span", q, "--degrees", "t:;r:;s:1,1", "--seed", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verdict span = full"));
    let o = qsemi(&["oracle", q, "--degrees", "t:;r:;s:1,1", "--char", "2147483647", "--seed", "1"]);
    assert!(stdout(&o).contains("dimension 2"));
}

#[test]
fn exit_codes() {
    let q = quiver("bilinear1.json");
    let q = q.to_str().unwrap();
    assert_eq!(qsemi(&["admissible", q, "--degrees", "nonsense"]).status.code(), Some(2));
    assert_eq!(qsemi(&["generate", q, "--degrees", "t:;r:;s:1", "--all", "--char", "4"]).status.code(), Some(2));
    assert_eq!(qsemi(&["validate", quiver("bad_dims.json").to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(qsemi(&["admissible", q, "--degrees", "t:;r:;s:1,1"]).status.code(), Some(3));
    assert_eq!(qsemi(&["generate", q, "--degrees", "t:;r:;s:6", "--all", "--cap-size", "4"]).status.code(), Some(4));
}
