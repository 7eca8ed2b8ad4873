use std::path::Path;
use std::process::{Command, Output};

use quiverfold::folding::enumerate_folded_class;
use quiverfold::Catalog;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverfold")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], jobs: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverfold")).args(args).env("QUIVERFOLD_JOBS", jobs).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn exchange_graph_counts() {
    let out = run(&["exchange", "Dhat3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["vertices"], 20);
    assert_eq!(r["result"]["edges"], 30);
    assert_eq!(r["exhausted"], true);
}

#[test]
fn folded_class_matches_the_library() {
    let expected = enumerate_folded_class(&Catalog::get("Y5").unwrap().folded, 1000).unwrap().len();
    let r = report(&run(&["folded-class", "Y5"]));
    assert_eq!(r["result"]["class_size"], expected);
}

#[test]
fn surface_count() {
    let r = report(&run(&["surface", "count", "-n", "4"]));
    assert_eq!(r["result"]["triangulations"], 70);
}

#[test]
fn faces_report() {
    let r = report(&run(&["faces", "Hhat3", "--unfolded-mode"]));
    let res = &r["result"];
    assert_eq!((res["variables"].as_u64(), res["clusters"].as_u64()), (Some(18), Some(32)));
    assert_eq!(res["euler_characteristic"], 2);
    assert_eq!(res["two_faces"]["histogram"]["7"], 4);
}

#[test]
fn cap_exhaustion_exits_with_two() {
    let out = run(&["exchange", "Dcirc5", "--unfolded-mode", "--cap", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["exhausted"], false);
}

#[test]
fn errors_exit_with_one_and_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let out = run(&["export", "NoSuchQuiver", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!dot.exists());
    assert_eq!(run(&["relation", "Abar3", "--word", "1,9"]).status.code(), Some(1));
    assert_eq!(run(&["exchange", "Hhat3"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn reports_are_deterministic() {
    let args = ["faces", "Abar3", "--no-timings"];
    let a = run_env(&args, "1");
    let b = run_env(&args, "4");
    assert_eq!(a.stdout, b.stdout);
    let timed = report(&run(&["faces", "Abar3"]));
    assert!(timed["timings"]["elapsed_ms"].is_number());
    let again = report(&run(&["faces", "Abar3"]));
    assert_eq!(timed["digest"], again["digest"]);
}

#[test]
fn export_writes_dot_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("dhat3.dot");
    let json = dir.path().join("dhat3.json");
    let out = run(&["export", "Dhat3", "--dot", dot.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph exchange {"));
    assert_eq!(text.matches(" -- ").count(), 30);
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(g["vertices"].as_array().unwrap().len(), 20);
    assert_eq!(g["complex"]["f_vector"], serde_json::json!([12, 30, 20]));
    assert_eq!(report(&out)["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn flip_graph_export() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("flips.dot");
    let r = report(&run(&["surface", "flipgraph", "-n", "3", "--dot", dot.to_str().unwrap()]));
    assert_eq!(r["result"]["triangulations"], 20);
    assert_eq!(r["result"]["regular"], true);
    assert_eq!(std::fs::read_to_string(&dot).unwrap().matches(" -- ").count(), 30);
}

#[test]
fn mutate_and_class_read_quiver_files() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("a3.json");
    std::fs::write(&q, r#"{"arrows": [[0, 1], [1, 2]]}"#).unwrap();
    let r = report(&run(&["mutate", "-q", q.to_str().unwrap(), "-k", "2"]));
    assert_eq!(r["result"]["quiver"]["b"], serde_json::json!([[0, -1, 1], [1, 0, -1], [-1, 1, 0]]));
    let r = report(&run(&["class", "-q", q.to_str().unwrap()]));
    assert_eq!(r["result"]["class_size"], 4);
    assert!(Path::new(&q).exists());
}

#[test]
fn catalog_listing() {
    let r = report(&run(&["catalog", "list"]));
    let names: Vec<&str> = r["result"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"Ehat6_22") && names.contains(&"Y7") && names.contains(&"Dhat<n>"));
    let r = report(&run(&["catalog", "show", "X7_fold"]));
    assert_eq!(r["result"]["folding"]["groups"].as_array().unwrap().len(), 5);
}
