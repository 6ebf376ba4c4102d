use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use graphsym::generators::{named, Family};
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("graphsym").chain(args.iter().copied());
    let code = graphsym_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        let files = Files { dir: TempDir::new().unwrap() };
        files.write("fig1.txt", &named(Family::Figure1).unwrap().to_edge_list());
        files.write("c6.g6", &named(Family::Cycle(6)).unwrap().to_graph6());
        let k3 = named(Family::Complete(3)).unwrap();
        files.write("two_triangles.g6", &k3.disjoint_union(&k3).0.to_graph6());
        files.write("k33.txt", &named(Family::CompleteBipartite(3, 3)).unwrap().to_edge_list());
        files.write("k11.txt", &named(Family::Complete(11)).unwrap().to_edge_list());
        files.write("broken.txt", "3 2\n0 1\n");
        files
    }

    fn write(&self, name: &str, text: &str) {
        std::fs::write(self.dir.path().join(name), text).unwrap();
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

#[test]
fn dist_and_fix_of_figure1() {
    let f = Files::new();
    assert_eq!(run(&["dist", "--format", "edgelist", &f.path("fig1.txt")]), (0, "3\n".into(), String::new()));
    assert_eq!(run(&["fix", &f.path("fig1.txt")]).1, "4\n");
}

#[test]
fn iso_reports_heuristic_equivalence() {
    let f = Files::new();
    let (code, out, _) = run(&["iso", &f.path("c6.g6"), &f.path("two_triangles.g6")]);
    assert_eq!((code, out.as_str()), (0, "HeuristicEquivalent\n"));
}

#[test]
fn not_amenable_exits_with_two_and_payload() {
    let f = Files::new();
    let (code, out, err) = run(&["dist", "--json", &f.path("k33.txt")]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "not_amenable");
    assert_eq!(v["verdict"]["failure"]["condition"], "A");
    assert!(err.contains("not amenable"));
}

#[test]
fn parse_and_io_errors_exit_with_one() {
    let f = Files::new();
    assert_eq!(run(&["refine", &f.path("broken.txt")]).0, 1);
    assert_eq!(run(&["refine", &f.path("missing.txt")]).0, 1);
    let (code, out, _) = run(&["--json", "refine", &f.path("missing.txt")]);
    assert_eq!(code, 1);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["error"], "input");
    assert_eq!(run(&["frobnicate"]).0, 1);
}

#[test]
fn oracle_guard_exits_with_two() {
    let f = Files::new();
    let (code, _, err) = run(&["oracle", "fix", &f.path("k11.txt")]);
    assert_eq!(code, 2);
    assert!(err.contains("limit"));
    assert_eq!(run(&["oracle", "fix", "--max-oracle-n", "11", &f.path("k11.txt")]).1, "10\n");
}

#[test]
fn oracle_subcommands() {
    let f = Files::new();
    let (code, out, _) = run(&["oracle", "aut", "--max-oracle-n", "12", &f.path("fig1.txt")]);
    assert_eq!((code, out.as_str()), (0, "64\n"));
    assert_eq!(run(&["oracle", "dist", "--max-oracle-n", "12", &f.path("fig1.txt")]).1, "3\n");
    assert_eq!(run(&["oracle", "count", "--colors", "3", &f.path("c6.g6")]).0, 0);
}

#[test]
fn json_outputs_are_stable() {
    let f = Files::new();
    for cmd in ["refine", "cells", "amenable", "dist", "fix"] {
        let (code, a, _) = run(&["--json", "--components", cmd, &f.path("fig1.txt")]);
        assert_eq!(code, 0, "{cmd}");
        let parsed: Value = serde_json::from_str(&a).unwrap();
        assert!(parsed.is_object());
        assert_eq!(run(&["--json", "--components", cmd, &f.path("fig1.txt")]).1, a, "{cmd}");
    }
    let (_, out, _) = run(&["--json", "--components", "dist", &f.path("fig1.txt")]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dist_number"], 3);
    assert_eq!(v["components"].as_array().unwrap().len(), 3);
}

#[test]
fn exact_counts_flag() {
    let f = Files::new();
    assert_eq!(run(&["dist", "--exact-counts", &f.path("fig1.txt")]).1, "3\n");
}

#[test]
fn gen_round_trips_through_commands() {
    let f = Files::new();
    let (code, text, _) = run(&["gen", "--family", "jellyfish", "--out", "graph6"]);
    assert_eq!(code, 0);
    f.write("jelly.g6", &text);
    assert_eq!(run(&["dist", &f.path("jelly.g6")]).1, "2\n");
    assert_eq!(run(&["fix", &f.path("jelly.g6")]).1, "5\n");
    f.write(
        "spec.json",
        r#"{"components":[{"head":"FIVE_CYCLE","root_size":5,"tree":[{"size":5},{"size":5,"children":[{"size":10}]}]}]}"#,
    );
    let (code, text, _) = run(&["gen", "--spec", &f.path("spec.json"), "--seed", "4"]);
    assert_eq!(code, 0);
    f.write("spec_out.txt", &text);
    assert_eq!(run(&["fix", &f.path("spec_out.txt")]).1, "5\n");
    let (code, a, _) = run(&["gen", "--random", "20", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(run(&["gen", "--random", "20", "--seed", "3"]).1, a);
    f.write("bad_spec.json", r#"{"components":[{"head":"FIVE_CYCLE","root_size":4}]}"#);
    assert_eq!(run(&["gen", "--spec", &f.path("bad_spec.json")]).0, 1);
}

#[test]
fn bench_writes_csv() {
    let (code, out, err) = run(&["bench", "--sizes", "500,1000"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,m,seconds,dist,fix");
    assert_eq!(lines.len(), 3);
    assert!(err.contains("time ratio"));
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_graphsym"))
}

#[test]
fn binary_reads_stdin() {
    let mut child = Command::new(binary())
        .args(["dist", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(named(Family::Figure1).unwrap().to_edge_list().as_bytes()).unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert_eq!(String::from_utf8(output.stdout).unwrap(), "3\n");
}

#[test]
fn binary_exit_codes() {
    let f = Files::new();
    let status = Command::new(binary()).args(["dist", &f.path("c6.g6")]).stderr(Stdio::null()).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = Command::new(binary()).args(["dist", &f.path("nope.txt")]).stderr(Stdio::null()).status().unwrap();
    assert_eq!(status.code(), Some(1));
}
