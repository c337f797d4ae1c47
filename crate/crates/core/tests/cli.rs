use std::path::Path;
use std::process::{Command, Output};

fn borelforge(args: &[&str]) -> Output {
    borelforge_with_config(args, None)
}

fn borelforge_with_config(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_borelforge"));
    cmd.args(args).env_remove("BORELFORGE_CONFIG");
    if let Some(p) = config {
        cmd.env("BORELFORGE_CONFIG", p);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn xi_prints_threshold() {
    let o = borelforge(&["xi", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        r#"{"m":2,"xi":3,"Xi":{"terms":[{"a":3,"q":"1"}],"r":"3"}}"#
    );
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["tree", "build", "--depth", "9"],
        vec!["tree", "build", "--fanout", "17"],
        vec!["verify"],
        vec!["point", "eval", "--coords", "nonsense"],
        vec![
            "verify", "claim2", "--stems", "|1", "--lambda", "1,-1", "--k-from", "10",
        ],
    ] {
        let o = borelforge(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn lemma1_reports_are_reproducible() {
    let args = [
        "verify", "lemma1", "--trials", "100", "--m-max", "2", "--seed", "7",
    ];
    let a = borelforge(&args);
    let b = borelforge(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].contains(r#""seed":7"#));
    assert_eq!(
        lines.last().unwrap(),
        &r#"{"kind":"summary","trials":100,"passes":100,"failures":0}"#
    );
}

#[test]
fn claim2_and_hull_commands() {
    let o = borelforge(&[
        "verify",
        "claim2",
        "--stems",
        "|1",
        "--lambda",
        "2,-2",
        "--k-from",
        "260",
        "--k-count",
        "41",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("{\"kind\":\"summary\",\"checked\":41,\"failures\":0}\n"));

    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let z = dir.path().join("z.json");
    std::fs::write(&a, r#"{"lambda":["1/10"],"stems":[[]]}"#).unwrap();
    std::fs::write(&b, r#"{"lambda":["1"],"stems":[[1]]}"#).unwrap();
    std::fs::write(&z, r#"{"lambda":[],"stems":[]}"#).unwrap();
    let (a, b, z) = (
        a.to_str().unwrap(),
        b.to_str().unwrap(),
        z.to_str().unwrap(),
    );

    let o = borelforge(&["hull", "distinguish", "--a", a, "--b", z, "--m-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = borelforge(&["hull", "distinguish", "--a", a, "--b", z, "--rescale"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""scale":"10""#));
    let o = borelforge(&["hull", "distinguish", "--a", b, "--b", b]);
    assert!(stdout(&o).contains(r#""result":"identical""#));
    let o = borelforge(&["hull", "encode", "--code", b, "--coords", "0..3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn export_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("tree.json");
    let second = dir.path().join("again.json");
    let o = borelforge(&[
        "export",
        "--depth",
        "2",
        "--fanout",
        "3",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = borelforge(&[
        "export",
        "--input",
        first.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let bytes = std::fs::read(&first).unwrap();
    assert_eq!(bytes, std::fs::read(&second).unwrap());

    // A document whose values disagree with the construction is re-exported but fails the check.
    let text = String::from_utf8(bytes).unwrap();
    let tampered = text.replacen(r#""r":"-1/2""#, r#""r":"-3/4""#, 1);
    assert_ne!(tampered, text);
    std::fs::write(&second, tampered).unwrap();
    let o = borelforge(&["export", "--input", second.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# tree shape\ndepth = 1\nfanout = 2\n").unwrap();
    let o = borelforge_with_config(&["tree", "build"], Some(&cfg));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 3);
    let o = borelforge_with_config(&["tree", "build", "--depth", "0"], Some(&cfg));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 1);

    std::fs::write(&cfg, "depth = 12\n").unwrap();
    assert_eq!(
        borelforge_with_config(&["tree", "build"], Some(&cfg))
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.conf");
    assert_eq!(
        borelforge_with_config(&["tree", "build"], Some(&missing))
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = borelforge(&["xi", "--m", "1", "--out", "/nonexistent-dir/xi.json"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn thick_queries() {
    let o = borelforge(&["thick", "member", "--family", "0", "--value", "253"]);
    assert!(stdout(&o).contains(r#""member":true"#));
    let o = borelforge(&["thick", "member", "--family", "1", "--value", "253"]);
    assert!(stdout(&o).contains(r#""member":false"#));
    let o = borelforge(&["thick", "marker", "--family", "1", "--n", "20"]);
    assert!(stdout(&o).contains(r#""marker":{"terms":[{"a":5,"q":"1"}],"r":"-5"}"#));
    let o = borelforge(&["point", "eval", "--coords", "0..=1"]);
    assert_eq!(o.status.code(), Some(0));
}
