use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn iel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iel"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("iel-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn decide_refutes_reflection_with_a_two_world_model() {
    let out = iel(&["decide", "--logic", "iel", "--format", "json", "K a -> a"]);
    assert_eq!(out.status.code(), Some(1));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["status"], "invalid");
    assert_eq!(json["model"]["worlds"].as_array().unwrap().len(), 2);
}

#[test]
fn decide_proves_distribution() {
    let out = iel(&["decide", "--logic", "iel", "K(a->b) -> (K a -> K b)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("valid in iel"));
    assert!(stdout(&out).contains("(KR)"));
}

#[test]
fn crosscheck_reports_consistency() {
    let out = iel(&["crosscheck", "--logic", "iel", "--bound", "3", "K(a|b) -> (K a | K b)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("consistent"), "{text}");
    assert!(text.contains("prover invalid"));

    let out = iel(&["crosscheck", "--format", "json", "a -> K a"]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["verdict"], "consistent");
    assert!(json["oracle"]["countermodel"].is_null());
}

#[test]
fn random_crosscheck_is_deterministic() {
    let a = iel(&["crosscheck", "--random", "15", "--seed", "9"]);
    let b = iel(&["crosscheck", "--random", "15", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with("15 formulas, 0 contradictions\n"));
}

#[test]
fn batch_over_shipped_corpus_passes_in_order() {
    let out = iel(&["batch", "--corpus", "corpus/paper.txt", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let lines: Vec<usize> = stdout(&out)
        .lines()
        .filter_map(|l| l.strip_prefix("PASS line "))
        .map(|l| l.split(':').next().unwrap().parse().unwrap())
        .collect();
    assert!(!lines.is_empty());
    assert!(lines.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn batch_flags_wrong_statuses() {
    let corpus = scratch("wrong.txt", "# wrong on purpose\nvalid iel K a -> a\ninvalid iel a -> K a\n");
    let out = iel(&["batch", "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).matches("FAIL").count(), 2);
}

#[test]
fn prove_hides_models_unless_asked() {
    let out = iel(&["prove", "K a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).is_empty());
    let out = iel(&["prove", "--model", "K a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("depth 1"));
}

#[test]
fn refute_prints_refutation_and_model() {
    let out = iel(&["refute", "--format", "json", "K a -> a"]);
    assert_eq!(out.status.code(), Some(1));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["refutation"]["calculus"], "riel");
    assert_eq!(json["refutation"]["rule"], "ImpR1");
    assert_eq!(json["model"]["worlds"].as_array().unwrap().len(), 2);
}

#[test]
fn certificates_round_trip_through_checkers() {
    let proof = iel(&["decide", "--format", "json", "~~(K a -> a)"]);
    let path = scratch("proof.json", &stdout(&proof));
    assert_eq!(iel(&["check-proof", path.to_str().unwrap()]).status.code(), Some(0));
    // The same proof is not a proof under the weaker logic.
    assert_eq!(
        iel(&["check-proof", "--logic", "iel-", path.to_str().unwrap()]).status.code(),
        Some(1)
    );

    let model = iel(&["decide", "--format", "json", "K a -> a"]);
    let path = scratch("model.json", &stdout(&model));
    let p = path.to_str().unwrap();
    assert_eq!(iel(&["check-model", p, "--formula", "K a -> a"]).status.code(), Some(0));
    assert_eq!(iel(&["check-model", p, "--formula", "a -> K a"]).status.code(), Some(1));

    let refutation = iel(&["refute", "--format", "json", "K(a|b) -> (K a | K b)"]);
    let path = scratch("refutation.json", &stdout(&refutation));
    assert_eq!(iel(&["check-refutation", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn dot_output_for_models_only() {
    let out = iel(&["decide", "--logic", "iel-", "--format", "dot", "K a -> ~~a"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("digraph model {"));
    let out = iel(&["batch", "--format", "dot", "--corpus", "corpus/paper.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_two() {
    assert_eq!(iel(&["decide", "K ("]).status.code(), Some(2));
    assert_eq!(iel(&["decide", "--logic", "s5", "a"]).status.code(), Some(2));
    let junk = scratch("junk.json", "{\"status\": \"valid\", \"proof\": 3}");
    assert_eq!(iel(&["check-proof", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(iel(&["batch", "--corpus", "/nonexistent/corpus.txt"]).status.code(), Some(2));
}
