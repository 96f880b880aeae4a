//! End-to-end runs of the qsverify binary: exit codes, report formats and
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use quartic_solids::vcli::parse_machine_report;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{}.fixture", name))
}

fn qsverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsverify")).args(args).output().expect("run qsverify")
}

fn verify(name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec!["verify", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    qsverify(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_fixtures_exit_zero() {
    for name in ["pr2", "pr5", "pr6", "eq4", "pr8", "pr8_order192", "pr8_order288", "pr11", "sec11", "sysZero"] {
        let o = verify(name, &[]);
        assert_eq!(o.status.code(), Some(0), "{}:\n{}", name, stdout(&o));
        let text = stdout(&o);
        assert!(text.lines().any(|l| l.starts_with("SUMMARY ") && l.ends_with("exit=0")), "{}", text);
    }
}

#[test]
fn determinantal_fixture_with_numeric_oracle() {
    let o = verify("determinantal", &["--numeric-oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn mismatching_fixtures_exit_one() {
    for name in ["eq5", "pr10", "pr13", "pr14"] {
        let o = verify(name, &["--format", "machine"]);
        assert_eq!(o.status.code(), Some(1), "{}", name);
        let r = parse_machine_report(&stdout(&o)).unwrap();
        assert!(r.summary().mismatch > 0, "{}", name);
        assert_eq!(r.summary().fail, 0, "{}", name);
    }
}

#[test]
fn parameter_override_specializes() {
    let o = verify("pr8", &["--param", "t=-1", "--format", "machine"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = parse_machine_report(&stdout(&o)).unwrap();
    let group = r.records.iter().find(|c| c.kind == "matches_paper").unwrap();
    assert!(group.detail.contains("192"), "{}", group.detail);
}

#[test]
fn configuration_errors_exit_two() {
    let o = verify("pr8", &["--param", "s=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = qsverify(&["verify", "/nonexistent/x.fixture"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = std::env::temp_dir().join(format!("qsverify-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.fixture");
    std::fs::write(&bad, "[field]\ntower = sqrt(\n").unwrap();
    let o = qsverify(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column 13"), "{}", err);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn machine_report_is_deterministic() {
    let a = verify("pr13", &["--format", "machine"]);
    let b = verify("pr13", &["--format", "machine"]);
    assert_eq!(a.stdout, b.stdout);
    let r = parse_machine_report(&stdout(&a)).unwrap();
    let ids: Vec<String> = r.records.iter().map(|c| c.id.clone()).collect();
    let want: Vec<String> = (1..=ids.len()).map(|k| k.to_string()).collect();
    assert_eq!(ids, want, "records keep declaration order");
}

#[test]
fn report_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("qsverify-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.txt");
    let o = verify("pr5", &["--format", "machine", "--report", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, stdout(&verify("pr5", &["--format", "machine"])));
    std::fs::remove_dir_all(&dir).unwrap();
}
