//! End-to-end runs of the `vgraph` binary.

use std::process::{Command, Output};

use serde_json::Value;

const GRID: &str = "n=9; 1-2,2-3,4-5,5-6,7-8,8-9,1-4,4-7,2-5,5-8,3-6,6-9";

fn vgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vgraph"))
        .args(args)
        .env_remove("VG_SEED")
        .env_remove("VG_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_reports_and_exit_codes() {
    let out = vgraph(&["check", "--format", "edge-list", GRID]);
    assert_eq!(out.status.code(), Some(10));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["overall"], "finite-solvable-undecided");
    assert_eq!(report["finite"]["kernel_dim"], 27);
    assert_eq!(report["finite"]["seed"], 42);
    assert!(report["timings"].is_object());

    let out = vgraph(&["check", "n=3; 1-2, 2-3, 3-1"]);
    assert_eq!(out.status.code(), Some(0));

    let out = vgraph(&["check", "--no-timings", "n=4; 1-2, 2-3, 3-4, 4-1"]);
    assert_eq!(out.status.code(), Some(30));
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["necessary"]["violated_rule"], "adjacent-degree2");
    assert_eq!(report["necessary"]["witness"]["kind"], "edge");
    assert!(report.get("timings").is_none());
    assert!(report["finite"].is_null());
}

#[test]
fn bad_input_exits_with_two() {
    let out = vgraph(&["check", "n=3; 1-2, 2-"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
    assert_eq!(vgraph(&["check", "n=3; 1-4"]).status.code(), Some(2));
    assert_eq!(vgraph(&["census", "--n", "x"]).status.code(), Some(2));
}

#[test]
fn graph_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "HkSg_SD\n").unwrap();
    let out = vgraph(&["check", "--no-timings", "-i", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));

    let mut child = Command::new(env!("CARGO_BIN_EXE_vgraph"))
        .args(["convert", "--to", "graph6"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(GRID.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout(&out), "HkSg_SD\n");
}

#[test]
fn closure_trace_and_dot() {
    let out = vgraph(&[
        "closure",
        "--trace",
        "--dot",
        "n=4; 1-2, 2-3, 3-4, 4-1, 1-3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("digraph \"before\""));
    assert!(text.contains("digraph \"after\""));
    assert_eq!(text.matches("dir=none").count(), 5 + 6);
    assert!(text
        .trim_end()
        .ends_with("complete after 1 steps; solid edges 6, dashed arrows []"));
}

#[test]
fn construct_outputs_minimal_graphs() {
    let out = vgraph(&["construct", "--n", "10"]);
    let text = stdout(&out);
    assert!(text.starts_with("n=10; "));
    assert_eq!(text.matches('-').count(), 14);
    let out = vgraph(&["--format", "graph6", "construct", "--n", "6"]);
    assert_eq!(stdout(&out), "E?~o\n");
    assert_eq!(vgraph(&["construct", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn census_json_is_stable_and_resumable() {
    let a = vgraph(&["census", "--n", "6,7", "--json", "--jobs", "1"]);
    let b = vgraph(&["census", "--n", "6,7", "--json", "--jobs", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["rows"][1]["connected"], 107);

    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("r.jsonl");
    let r = records.to_str().unwrap();
    let first = vgraph(&["census", "--n", "7", "--json", "--records", r]);
    let lines = std::fs::read_to_string(&records).unwrap();
    assert_eq!(lines.lines().count(), 107);
    // drop half the records and cut the last one short
    let kept: Vec<&str> = lines.lines().take(50).collect();
    let mut torn = kept.join("\n");
    torn.truncate(torn.len() - 5);
    std::fs::write(&records, torn).unwrap();
    let resumed = vgraph(&["census", "--n", "7", "--json", "--records", r, "--resume"]);
    assert_eq!(first.stdout, resumed.stdout);

    let seeded = vgraph(&["--seed", "7", "census", "--n", "6", "--json"]);
    let env_seeded = Command::new(env!("CARGO_BIN_EXE_vgraph"))
        .args(["census", "--n", "6", "--json"])
        .env("VG_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(seeded.stdout, env_seeded.stdout);
    assert!(stdout(&seeded).contains("\"seed\": 7"));
}

#[test]
fn hidden_oracle_runs() {
    let out = vgraph(&["oracle", "--instances", "20"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("move II held on 20/20, move III on 20/20"));
    assert!(!stdout(&vgraph(&["--help"])).contains("oracle"));
}
