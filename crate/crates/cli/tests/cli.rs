use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn dqi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqi"))
        .args(args)
        .output()
        .expect("spawn dqi")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn compute_toy(out: &Path) -> Output {
    dqi(&[
        "compute",
        "--input",
        s(&fixture("toy.ndjson")),
        "--tag-lexicon",
        s(&fixture("toy.lexicon")),
        "--out",
        s(out),
    ])
}

#[test]
fn compute_writes_seven_reports_and_one_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = compute_toy(&out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for c in 1..=7 {
        let text = std::fs::read_to_string(out.join(format!("c{c}.json"))).unwrap();
        let doc: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["manifest"], "manifest.json");
        assert_eq!(doc["report"]["component"], format!("c{c}"));
    }
    let manifests: Vec<_> = std::fs::read_dir(&out)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .contains("manifest")
        })
        .collect();
    assert_eq!(manifests.len(), 1);

    let text = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["command"], "compute");
    assert_eq!(doc["providers"]["sentence"], "tfidf-cosine");
    assert_eq!(doc["artifacts"].as_array().unwrap().len(), 9);
    let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
}

#[test]
fn components_are_finite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert!(compute_toy(&out).status.success());
    let agg: Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("aggregate.json")).unwrap())
            .unwrap();
    let v = agg["aggregate"]["value"].as_f64().unwrap();
    assert!(v.is_finite() && v.abs() < 1e6, "aggregate {v}");
}

#[test]
fn missing_input_exits_one_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = dqi(&[
        "compute",
        "--input",
        "no/such/corpus.ndjson",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no/such/corpus.ndjson"));
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(dqi(&["compute", "--frobnicate"]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(dqi(&["--help"]).status.code(), Some(0));
    assert_eq!(dqi(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_typo_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[c1]\naa = 3\n").unwrap();
    let o = dqi(&[
        "compute",
        "--input",
        s(&fixture("toy.ndjson")),
        "--config",
        s(&cfg),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.toml") && err.contains("aa"), "{err}");
}

#[test]
fn unknown_granularity_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = dqi(&[
        "compute",
        "--input",
        s(&fixture("toy.ndjson")),
        "--granularities",
        "words,clauses",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("clauses"));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = dqi(&[
        "compute",
        "--input",
        s(&fixture("toy.ndjson")),
        "--out",
        s(&blocker.join("sub")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn self_comparison_is_all_ties() {
    let dir = tempfile::tempdir().unwrap();
    let toy = fixture("toy.ndjson");
    let o = dqi(&[
        "compare",
        "--input-good",
        s(&toy),
        "--input-bad",
        s(&toy),
        "--out",
        s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("comparison.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("component,term,good,bad,verdict,color"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let expected = if f[2].is_empty() { "undefined" } else { "tie" };
        assert_eq!(f[4], expected, "{line}");
    }
}

#[test]
fn partitioned_compare_needs_both_tags() {
    let dir = tempfile::tempdir().unwrap();
    let o = dqi(&[
        "compare",
        "--input",
        s(&fixture("toy.ndjson")),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("partition"));
}

#[test]
fn exported_matrix_reproduces_tfidf_reports() {
    let dir = tempfile::tempdir().unwrap();
    let toy = fixture("toy.ndjson");
    let lex = fixture("toy.lexicon");
    let export = dir.path().join("sim");
    assert!(
        dqi(&["export-sim", "--input", s(&toy), "--out", s(&export)])
            .status
            .success()
    );
    let tsv = std::fs::read_to_string(export.join("sentences.tsv")).unwrap();
    assert!(tsv.starts_with("ordinal\tsample\tside\ttext\n"));

    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(dqi(&[
        "compute",
        "--input",
        s(&toy),
        "--tag-lexicon",
        s(&lex),
        "--out",
        s(&a)
    ])
    .status
    .success());
    let o = dqi(&[
        "compute",
        "--input",
        s(&toy),
        "--tag-lexicon",
        s(&lex),
        "--sim-matrix",
        s(&export.join("similarity.txt")),
        "--out",
        s(&b),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read(a.join("components.csv")).unwrap(),
        std::fs::read(b.join("components.csv")).unwrap()
    );
}

#[test]
fn bin_removes_the_planted_samples() {
    let dir = tempfile::tempdir().unwrap();
    let o = dqi(&[
        "bin",
        "--input",
        s(&fixture("planted.ndjson")),
        "--config",
        s(&fixture("planted.toml")),
        "--out",
        s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("verdicts.csv")).unwrap();
    let removed: Vec<&str> = csv
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("remove"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(removed.len(), 2, "{csv}");
}
