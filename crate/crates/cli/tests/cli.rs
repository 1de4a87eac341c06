use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use modsup::io::load_generator;

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/example1").join(file)
}

fn modsup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modsup")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn solve_writes_supervisors_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = modsup(&["solve", "--manifest", p(&data("problem.toml")), "--out-dir", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("status: exact"));
    for f in ["s1.gen", "s2.gen", "coordinator.gen"] {
        let (_, g) = load_generator(&out.join(f)).unwrap();
        assert!(g.num_states() > 0);
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "exact");
    assert!(report["artifacts"].as_array().unwrap().iter().all(|a| a["states"].is_u64() && a["transitions"].is_u64()));

    let (_, s1) = load_generator(&out.join("s1.gen")).unwrap();
    assert!(s1.accepts(&["a", "a1"]));
    let v = modsup(&[
        "verify",
        "--manifest",
        p(&data("problem.toml")),
        "--s1",
        p(&out.join("s1.gen")),
        "--s2",
        p(&out.join("s2.gen")),
    ]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = modsup(&["solve", "--manifest", p(&data("problem.toml")), "--out-dir", p(out)]);
        assert_eq!(code(&o), 0);
    }
    for f in ["s1.gen", "s2.gen", "coordinator.gen", "report.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn decomposability_check_passes() {
    let o = modsup(&[
        "check",
        "cd",
        "--plant",
        p(&data("g1.gen")),
        "--plant",
        p(&data("g2.gen")),
        "--spec",
        p(&data("k.gen")),
        "--sigma-k",
        "a,d",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn projected_spec_is_not_controllable_for_the_coordinator() {
    let dir = tempfile::tempdir().unwrap();
    let (pk, gk) = (dir.path().join("pk.gen"), dir.path().join("gk.gen"));
    let o = modsup(&["project", "--plant", p(&data("k.gen")), "--sigma", "a,d", "--out", p(&pk)]);
    assert_eq!(code(&o), 0);
    let o = modsup(&["coordinator", "--manifest", p(&data("problem.toml")), "--out", p(&gk)]);
    assert_eq!(code(&o), 0);
    let report = dir.path().join("r.json");
    let o = modsup(&["check", "controllable", "--spec", p(&pk), "--plant", p(&gk), "--report", p(&report)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("counterexample `a d`"));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(r["holds"], false);
    assert_eq!(r["counterexample"]["word"], serde_json::json!(["a", "d"]));
}

#[test]
fn conditional_controllability_flavours() {
    let m = data("problem.toml");
    assert_eq!(code(&modsup(&["check", "rcc", "--manifest", p(&m)])), 0);
    assert_eq!(code(&modsup(&["check", "cc", "--manifest", p(&m)])), 1);
    let o = modsup(&["oracle", "cd", "--manifest", p(&m)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("agree"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gen");
    fs::write(&bad, "name = \"x\"\nstates = [\n").unwrap();
    let o = modsup(&["compose", "--plant", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.gen"));
    assert_eq!(code(&modsup(&["check", "cd", "--spec", p(&data("k.gen"))])), 2);
    assert_eq!(code(&modsup(&["no-such-command"])), 2);
}

#[test]
fn empty_languages_do_not_panic() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.gen");
    fs::write(
        &empty,
        "name = \"empty\"\nstates = [\"s0\"]\ninitial = \"s0\"\nmarked = []\ntransitions = []\n\n\
         [[events]]\nname = \"a\"\ncontrollable = false\n",
    )
    .unwrap();
    let out = dir.path().join("sup.gen");
    let o = modsup(&["supcon", "--spec", p(&empty), "--plant", p(&empty), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = modsup(&["check", "nonconflicting", "--plant", p(&empty), "--plant", p(&empty)]);
    assert!(matches!(code(&o), 0 | 1));
    let o = modsup(&["check", "observer", "--plant", p(&empty)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn conflicting_parts_get_a_coordinator() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/conflict/problem.toml");
    let o = modsup(&["solve", "--manifest", p(&manifest), "--out-dir", p(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("status: relaxed-with-nc-coordinator"));
    let (_, c) = load_generator(&dir.path().join("c.gen")).unwrap();
    assert!(c.accepts(&["b", "y"]));
    assert!(!stdout(&o).contains("FAIL"));
}
