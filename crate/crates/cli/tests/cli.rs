use std::process::{Command, Output};

use serde_json::Value;

fn pgwitness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgwitness"))
        .args(args)
        .env_remove("PGWITNESS_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn obstruct_thm1_example() {
    let out = pgwitness(&[
        "obstruct",
        "thm1",
        "--p",
        "3",
        "--k",
        "1",
        "--m",
        "2",
        "--l",
        "1",
        "--u",
        "1",
        "--relation",
        "x^3 [y1,y2]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["verdict"], "obstructed");
    assert_eq!(v["report"]["image"], "tau^3 sigma^0");
    assert_eq!(v["report"]["image_order"], 3);
}

#[test]
fn metacyclic_example() {
    let out = pgwitness(&["metacyclic", "--p", "3", "--m", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let s = &v["report"]["structure"];
    assert_eq!(s["order"], 27);
    assert_eq!(s["exponent"], 9);
    assert_eq!(s["n0"], 3);
    assert_eq!(s["m0"], 4);
    assert!(s["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a["passed"] == true));
}

#[test]
fn obstruct_flags_must_match_relation() {
    let out = pgwitness(&[
        "obstruct",
        "1",
        "--p",
        "3",
        "--k",
        "1",
        "--m",
        "3",
        "--l",
        "2",
        "--relation",
        "x^3 [y1,y2]",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("disagrees"));
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &[
            "unipotent",
            "--p",
            "3",
            "--k",
            "2",
            "--congruence",
            "--seed",
            "7",
        ][..],
        &["dpoly", "--p", "3", "--instances", "40", "--seed", "11"][..],
        &[
            "sweep",
            "--grid",
            "thm=1,T;p=3;k=1;m=2..3;l=1..2;u=1,2;w=0,1",
        ][..],
    ] {
        let a = pgwitness(args);
        let b = pgwitness(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn bad_parameters_exit_nonzero_with_diagnostics() {
    for args in [
        &["metacyclic", "--p", "4", "--k", "1", "--m", "2"][..],
        &["padic", "--p", "3", "--k", "1", "--u", "3"][..],
        &["obstruct", "thm9", "--p", "3"][..],
        &["obstruct", "1", "--p", "3", "--k", "1"][..],
        &["sweep", "--grid", "m=4..2"][..],
        &["unipotent", "--p", "5", "--k", "1", "--congruence"][..],
    ] {
        let out = pgwitness(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = pgwitness(&["metacyclic", "--p", "three", "--k", "1", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn environment_sets_max_order() {
    let out = Command::new(env!("CARGO_BIN_EXE_pgwitness"))
        .args(["metacyclic", "--p", "3", "--k", "1", "--m", "2"])
        .env("PGWITNESS_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource limit"));
}

#[test]
fn text_format_is_readable() {
    let out = pgwitness(&[
        "padic", "--p", "5", "--k", "2", "--u", "3", "--format", "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: padic\npassed: true\n"));
}

#[test]
fn sweep_reports_counts() {
    let out = pgwitness(&["sweep", "--grid", "thm=l<m;p=3,5;m=2..4;l=1..4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let c = &v["report"]["counts"];
    // l < m pairs for m in 2..4, l in 1..4: 1 + 2 + 3 per prime.
    assert_eq!(c["obstructed"], 12);
    assert_eq!(c["failure"], 0);
}

#[test]
fn selftest_passes() {
    let out = pgwitness(&["selftest"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["report"]["criteria"].as_array().unwrap().len(), 8);
}
