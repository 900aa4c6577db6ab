use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn stabcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabcert")).args(args).env_remove("STABCERT_WORKERS").output().unwrap()
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn verify_w4a(dir: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.to_str().unwrap();
    let mut args = vec!["verify", "--stage", "W4a", "--out", out];
    args.extend(extra);
    let o = stabcert(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    dir.join("stage_W4a.json")
}

#[test]
fn verify_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = verify_w4a(dir.path(), &[]);
    let o = stabcert(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid"));
}

#[test]
fn tampered_certificate_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = verify_w4a(dir.path(), &[]);
    let text = fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["outcome"]["count"] = serde_json::json!(2);
    fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = stabcert(&["check", "--no-resample", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID"));
}

#[test]
fn truncated_certificate_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = verify_w4a(dir.path(), &[]);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert_eq!(stabcert(&["check", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "").unwrap();
    let out = file.join("certs");
    let o = stabcert(&["verify", "--stage", "W4a", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_file_exits_2_and_bad_stage_exits_3() {
    assert_eq!(stabcert(&["check", "/nonexistent/stage_P.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let o = stabcert(&["verify", "--stage", "W9", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn worker_count_does_not_change_certificates() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let one = fs::read_to_string(verify_w4a(a.path(), &["--workers", "1"])).unwrap();
    let two = fs::read_to_string(verify_w4a(b.path(), &["--workers", "2"])).unwrap();
    let strip = |t: &str| {
        let mut v: serde_json::Value = serde_json::from_str(t).unwrap();
        v["wall_time_ms"] = serde_json::json!(0);
        v
    };
    assert_eq!(strip(&one), strip(&two));
}

#[test]
fn inspect_fixtures() {
    let o = stabcert(&["inspect", "strength", &fixture("hyperoval.txt")]);
    assert!(stdout(&o).contains("strength 3"));
    let o = stabcert(&["inspect", "aut", &fixture("sevenzero_selfdual.txt")]);
    assert_eq!(stdout(&o).trim(), "42");
    let o = stabcert(&["inspect", "extensions", &fixture("sevenzero_selfdual.txt")]);
    assert_eq!(stdout(&o).lines().count(), 9);
    assert!(stdout(&o).starts_with("8 extension points"));
    let o = stabcert(&["inspect", "dual", &fixture("hyperoval.txt")]);
    assert!(stdout(&o).contains("dimension 3, minimum distance 4"));
    let o = stabcert(&["inspect", "quantum", &fixture("hyperoval.txt")]);
    assert!(stdout(&o).contains("self-orthogonal true"));
    let o = stabcert(&["inspect", "classify", &fixture("six_line_family_1.txt"), &fixture("six_line_family_2.txt"), &fixture("six_line_family_3.txt")]);
    assert!(stdout(&o).starts_with("2 classes"));
}

#[test]
fn malformed_configuration_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.txt");
    fs::write(&p, "not a matrix").unwrap();
    assert_eq!(stabcert(&["inspect", "aut", p.to_str().unwrap()]).status.code(), Some(3));
}
