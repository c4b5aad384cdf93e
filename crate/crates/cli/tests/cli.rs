use std::path::PathBuf;
use std::process::{Command, Output};

fn logarr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logarr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("logarr-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_all_suites_on_b2() {
    let o = logarr(&["verify", "--group", "B2", "--suite", "all", "--k-min", "-2", "--k-max", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn verify_hodge_on_g4() {
    let o = logarr(&["verify", "--group", "G4", "--suite", "hodge", "--k-min", "-1", "--k-max", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn unknown_group_is_a_usage_error() {
    let o = logarr(&["group", "--group", "H7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("H7"));
}

#[test]
fn group_summaries() {
    let cases = [
        ("B2", "[2, 4]", "[1, 3]", "|W|            8"),
        ("G4", "[4, 6]", "[1, 3]", "|W|            24"),
        ("A3", "[2, 3, 4]", "[1, 2, 3]", "|W|            24"),
    ];
    for (name, degrees, coexp, order) in cases {
        let o = logarr(&["group", "--group", name]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(out.contains(&format!("degrees        {degrees}")), "{out}");
        assert!(out.contains(&format!("coexponents    {coexp}")), "{out}");
        assert!(out.contains(order), "{out}");
    }
}

#[test]
fn saito_check_by_search() {
    let o = logarr(&["saito-check", "--group", "B2", "--nu", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_reports_are_reproducible() {
    let (a, b) = (tmp("a.json"), tmp("b.json"));
    for p in [&a, &b] {
        let o = logarr(&["--json", p.to_str().unwrap(), "universal", "--group", "B2", "--k", "1"]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let _ = (std::fs::remove_file(&a), std::fs::remove_file(&b));
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert!(v["wall_time"].is_null());
}
