use std::process::Command;

use endspace::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("endspace").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lines(out: &str) -> Vec<serde_json::Value> {
    out.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn validate_catalog() {
    let (code, out, _) = call(&["validate", "catalog:bintree-tops"]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out)[0]["detail"]["height"], "w*1 + 1");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let (code, _, err) = call(&["validate", "inftree(2"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 10"), "{err}");
    assert_eq!(call(&["validate", "catalog:nope"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["converge", "catalog:bintree", "--seq", "branch(period(0))"]).0, 2);
}

#[test]
fn converge_example() {
    let (code, out, _) = call(&[
        "converge",
        "catalog:bintree",
        "--seq",
        "branch(prefix=rep(0,n);period(1))",
        "--target",
        "branch(period(0))",
    ]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out)[0]["detail"]["verdict"], "Converges");
    let (_, out, _) = call(&[
        "oracle-converge",
        "catalog:bintree",
        "--seq",
        "branch(prefix=0;period(1))",
        "--target",
        "branch(period(0))",
        "--depth",
        "32",
    ]);
    assert_eq!(lines(&out)[0]["detail"]["verdict"], "Diverges");
}

#[test]
fn user_specs() {
    let (code, out, _) = call(&["build", "fan(chain(w), inftree(2))", "--depth", "4", "--breadth", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = call(&[
        "compare",
        "inftree(2)",
        "--samples",
        "10",
        "--depth",
        "32",
        "--seq",
        "branch(prefix=rep(1,n);period(0))",
    ]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out).len(), 10);
    // no catalog templates to fall back on
    assert_eq!(call(&["compare", "inftree(2)", "--samples", "3"]).0, 2);
}

#[test]
fn check_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("t.dot");
    let dot = dot.to_str().unwrap();
    for args in [
        &["build", "catalog:ladder-to-limit"][..],
        &["truncate", "catalog:bintree", "--depth", "3", "--dot", dot],
        &["adhesion", "catalog:ladder-to-limit"],
        &["split", "catalog:ladder-to-limit"],
        &["transport", "catalog:ladder-to-limit", "--samples", "8", "--depth", "32"],
        &["bipartitions", "catalog:bintree", "--pairs", "20"],
        &["expansion", "catalog:two-storey", "--samples", "20"],
        &["compare", "catalog:ray", "--samples", "3", "--depth", "32"],
    ] {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{args:?}: {err}{out}");
        assert!(lines(&out).iter().all(|r| r["pass"] == true));
    }
    let text = std::fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches(" -- ").count(), 14);
}

#[test]
fn failed_checks_exit_1() {
    // the ladder is not uniform: forcing the uniform reading fails the check
    let (code, out, _) = call(&["adhesion", "graft(withtops(chain(w), branches=[whole], mult=1), chain(w), roots=omega)", "--rule", "rungs"]);
    assert_eq!(code, 1);
    assert!(lines(&out).iter().any(|r| r["check"] == "uniform-adhesion" && r["pass"] == false));
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_endspace")).args(["validate", "catalog:ray"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"pass\":true"));
    let out = Command::new(env!("CARGO_BIN_EXE_endspace")).args(["validate", "chain("]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
