use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn setseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setseq"))
        .args(args)
        .env_remove("SETSEQ_FIXTURES")
        .output()
        .expect("run setseq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.json"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

/// Writes `json` to a file and checks that `verify` accepts it.
fn assert_verifies(dir: &Path, json: &str) {
    let doc: Value = serde_json::from_str(json).expect("output is JSON");
    assert!(doc["vertices"].is_array());
    let path = write(dir, "out.json", json);
    let out = setseq(&["verify", path.to_str().unwrap()]);
    assert_eq!(stdout(&out), "valid\n", "{}", stderr(&out));
    assert!(out.status.success());
}

const STAR: &str = r#"{"n":3,"vertices":[
  {"id":0,"label":"001"},{"id":1,"label":"010"},{"id":2,"label":"100"},{"id":3,"label":"111"}],
  "edges":[[0,1],[0,2],[0,3]]}"#;

#[test]
fn pair_solve_example() {
    let out = setseq(&["pair-solve", "--n", "2", "--targets", "01,01"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "00 01 01\n10 11 01\nroute=exact\n");
}

#[test]
fn pair_solve_reports_domain_errors() {
    let out = setseq(&["pair-solve", "--n", "2", "--targets", "01,10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error="));
}

#[test]
fn bundled_figure_verifies() {
    let out = setseq(&["verify", fixture("figure1").to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "valid\n");
}

#[test]
fn labeled_caterpillars_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (spec, method) in [
        ("T[3,3,3]", "auto"),
        ("T[3]", "small-diameter"),
        ("T[3,3,5,3,3,3]", "small-diameter"),
        ("T[5,3]", "large"),
        ("T[3,3,3]", "search"),
        ("T[3,2,2,2,2,2,2,2,2,2,2,2,2]", "auto"),
    ] {
        let out = setseq(&["label", "--caterpillar", spec, "--method", method]);
        assert!(out.status.success(), "{spec}: {}", stderr(&out));
        assert_verifies(dir.path(), &stdout(&out));
    }
}

#[test]
fn label_rejects_bad_inputs() {
    let out = setseq(&["label", "--caterpillar", "T[3,3]", "--method", "large"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("error=NotPowerOfTwo"),
        "{}",
        stderr(&out)
    );
    let out = setseq(&["label", "--caterpillar", "T[2,2,4,2]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error=Infeasible"));
    let out = setseq(&["label", "--caterpillar", "T[3,1]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_lists_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &STAR.replace("111", "011"));
    let out = setseq(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_ne!(stdout(&out), "valid\n");
    assert!(!stdout(&out).is_empty());
    assert!(stderr(&out).starts_with("error=NotSetSequential"));

    let junk = write(dir.path(), "junk.json", "{");
    let out = setseq(&["verify", junk.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error=InvalidDocument"));
}

#[test]
fn construct_commands() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.json", STAR);
    let out = setseq(&[
        "construct",
        "four-copies",
        "--base",
        star.to_str().unwrap(),
        "--u",
        "1",
        "--v",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 16);
    assert_verifies(dir.path(), &stdout(&out));

    let figure = fixture("figure1");
    let pendants = |plan: &str| {
        setseq(&[
            "construct",
            "pendants",
            "--base",
            figure.to_str().unwrap(),
            "--plan",
            plan,
        ])
    };
    let out = pendants("2:1,7:1,3:3,4:1,1:2");
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 16);
    assert_verifies(dir.path(), &stdout(&out));
    let out = pendants("2:1,7:1,3:2,4:1,1:2");
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).starts_with("error=PlanSizeMismatch"),
        "{}",
        stderr(&out)
    );

    let out = setseq(&[
        "construct",
        "four-copies",
        "--base",
        star.to_str().unwrap(),
        "--u",
        "0",
        "--v",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error=NotLeaf"));
}

#[test]
fn search_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(
        dir.path(),
        "tree.json",
        r#"{"n":3,"vertices":[{"id":0},{"id":1},{"id":2},{"id":3}],"edges":[[0,1],[0,2],[0,3]]}"#,
    );
    let out = setseq(&["search", "--tree", tree.to_str().unwrap(), "--seed", "7"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_verifies(dir.path(), &stdout(&out));

    let path4 = write(
        dir.path(),
        "p4.json",
        r#"{"n":3,"vertices":[{"id":0},{"id":1},{"id":2},{"id":3}],"edges":[[0,1],[1,2],[2,3]]}"#,
    );
    let out = setseq(&[
        "search",
        "--tree",
        path4.to_str().unwrap(),
        "--strategy",
        "exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error=Infeasible"));

    let out = setseq(&["export", "--dot", fixture("figure1").to_str().unwrap()]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("graph tree {"));
    assert_eq!(dot.matches(" -- ").count(), 7);
}

#[test]
fn sweep_small_dimensions() {
    let out = setseq(&["sweep", "--conjecture2", "--n", "3", "--shards", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().last().unwrap().ends_with("failures=0"));
    assert_eq!(text.lines().filter(|l| l.starts_with("shard=")).count(), 2);

    let one = setseq(&[
        "sweep",
        "--conjecture2",
        "--n",
        "3",
        "--shards",
        "2",
        "--shard",
        "1",
    ]);
    assert!(one.status.success());
    assert_eq!(stdout(&one).lines().count(), 2);

    assert_eq!(
        setseq(&["sweep", "--conjecture2", "--n", "5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(setseq(&["sweep", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn fixture_directory_override() {
    let empty = tempfile::tempdir().unwrap();
    let run = |dir: &Path| {
        Command::new(env!("CARGO_BIN_EXE_setseq"))
            .args(["label", "--caterpillar", "T[3,3,5,3,3,3]"])
            .env("SETSEQ_FIXTURES", dir)
            .output()
            .unwrap()
    };
    let out = run(empty.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error=MissingFixture"));

    let name = "T[3,3,5,3,3,3].json";
    std::fs::copy(fixture("T[3,3,5,3,3,3]"), empty.path().join(name)).unwrap();
    let out = run(empty.path());
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(setseq(&[]).status.code(), Some(2));
    assert_eq!(setseq(&["pair-solve", "--n", "2"]).status.code(), Some(2));
    assert_eq!(
        setseq(&["label", "--caterpillar", "T[3]", "--tree", "x.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        setseq(&["search", "--tree", "x", "--budget", "soon"])
            .status
            .code(),
        Some(2)
    );
}
