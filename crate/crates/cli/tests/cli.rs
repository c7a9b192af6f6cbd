use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn manifest() -> PathBuf {
    repo().join("fixtures/corpora/manifest.jsonl")
}

fn nlimine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlimine"))
        .args(args)
        .env_remove("NLIMINE_MANIFEST")
        .env_remove("NLIMINE_LEXICON")
        .env_remove("NLIMINE_TAGS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = nlimine(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn lines(p: &Path) -> usize {
    fs::read_to_string(p).unwrap().lines().count()
}

/// extract → split → stress with seed 7 into `dir`.
fn pipeline(dir: &Path) {
    let pairs = dir.join("pairs.jsonl");
    ok(&["extract", "--manifest", s(&manifest()), "--out", s(&pairs), "--seed", "7"]);
    ok(&[
        "split", "--pairs", s(&pairs), "--manifest", s(&manifest()), "--seed", "7",
        "--out-dir", s(&dir.join("split")),
    ]);
    ok(&[
        "stress", "--test", s(&dir.join("split/test.jsonl")), "--out-dir",
        s(&dir.join("stress")), "--seed", "7",
    ]);
}

const PIPELINE_FILES: &[&str] = &[
    "pairs.jsonl",
    "extract_report.json",
    "split/train.jsonl",
    "split/val.jsonl",
    "split/test.jsonl",
    "split/split_manifest.json",
    "split/split_report.json",
    "stress/test_length_mismatch.jsonl",
    "stress/test_negation.jsonl",
    "stress/test_overlap.jsonl",
    "stress/test_spelling.jsonl",
    "stress/stress_report.json",
];

/// Files stored verbatim under tests/golden; the rest are pinned by digest.
const VERBATIM: &[&str] = &[
    "extract_report.json",
    "split/split_manifest.json",
    "split/split_report.json",
    "split/test.jsonl",
    "stress/stress_report.json",
];

fn digests(dir: &Path) -> BTreeMap<String, String> {
    PIPELINE_FILES
        .iter()
        .map(|f| {
            let bytes = fs::read(dir.join(f)).unwrap();
            let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
            (f.to_string(), hex)
        })
        .collect()
}

#[test]
fn fixture_pipeline_matches_golden_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    pipeline(tmp.path());
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let got = digests(tmp.path());
    if std::env::var_os("NLIMINE_BLESS").is_some() {
        for f in VERBATIM {
            let dest = golden.join(f.replace('/', "__"));
            fs::create_dir_all(dest.parent().unwrap()).unwrap();
            fs::copy(tmp.path().join(f), dest).unwrap();
        }
        fs::write(golden.join("digests.json"), serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        return;
    }
    for f in VERBATIM {
        let expected = fs::read_to_string(golden.join(f.replace('/', "__"))).unwrap();
        let actual = fs::read_to_string(tmp.path().join(f)).unwrap();
        assert!(expected == actual, "{f} differs from tests/golden (rerun with NLIMINE_BLESS=1 after review)");
    }
    let expected: BTreeMap<String, String> =
        serde_json::from_str(&fs::read_to_string(golden.join("digests.json")).unwrap()).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn usage_errors_exit_with_status_2() {
    assert_eq!(nlimine(&["frobnicate"]).status.code(), Some(2));
    let tmp = tempfile::tempdir().unwrap();
    let out = s(&tmp.path().join("p.jsonl")).to_string();
    assert_eq!(nlimine(&["extract", "--manifest", s(&manifest()), "--out", &out]).status.code(), Some(2));
    assert_eq!(
        nlimine(&["extract", "--manifest", "/no/such/manifest.jsonl", "--out", &out, "--seed", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        nlimine(&["extract", "--manifest", s(&manifest()), "--out", &out, "--seed", "1", "--neutral-ratio", "-1"])
            .status
            .code(),
        Some(2)
    );
    for args in [
        vec!["split", "--pairs", &out, "--manifest", s(&manifest()), "--out-dir", s(tmp.path())],
        vec!["stress", "--test", &out, "--out-dir", s(tmp.path())],
        vec!["train-baseline", "--train", &out, "--out", s(tmp.path())],
    ] {
        assert_eq!(nlimine(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(nlimine(&["--threads", "0", "stats", "--pairs", s(&manifest())]).status.code(), Some(2));
}

#[test]
fn invalid_split_fractions_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let pairs = repo().join("fixtures/annotations/pairs.jsonl");
    let out = nlimine(&[
        "split", "--pairs", s(&pairs), "--manifest", s(&manifest()), "--seed", "1",
        "--test-frac", "1.5", "--out-dir", s(tmp.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn data_errors_exit_with_status_1_and_leave_a_report() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.jsonl");
    fs::write(&bad, "{\"pair_id\": 3}\n").unwrap();
    let out = nlimine(&["stress", "--test", s(&bad), "--out-dir", s(tmp.path()), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&tmp.path().join("stress_report.json"));
    assert_eq!(report["status"], "error");
}

#[test]
fn training_without_a_class_is_a_configuration_error() {
    let tmp = tempfile::tempdir().unwrap();
    let pairs = fs::read_to_string(repo().join("fixtures/annotations/pairs.jsonl")).unwrap();
    let no_neutral: String = pairs.lines().filter(|l| !l.contains("\"neutral\"")).map(|l| format!("{l}\n")).collect();
    let train = tmp.path().join("train.jsonl");
    fs::write(&train, no_neutral).unwrap();
    let out = nlimine(&["train-baseline", "--train", s(&train), "--out", s(&tmp.path().join("m.json")), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifest_path_can_come_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_nlimine"))
        .args(["extract", "--out", s(&tmp.path().join("p.jsonl")), "--seed", "1"])
        .env("NLIMINE_MANIFEST", repo().join("fixtures/wikipedia/manifest.jsonl"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(lines(&tmp.path().join("p.jsonl")), 1);
}

#[test]
fn stats_agree_with_run_reports() {
    let tmp = tempfile::tempdir().unwrap();
    pipeline(tmp.path());
    let d = tmp.path();
    ok(&["stats", "--pairs", s(&d.join("pairs.jsonl")), "--out", s(&d.join("all.json"))]);
    let all = json(&d.join("all.json"));
    let extract = json(&d.join("extract_report.json"));
    assert_eq!(all["stats"]["total"], extract["counters"]["pairs_written"]);
    let linked: u64 = ["contrasting", "entailment", "reasoning"]
        .iter()
        .map(|l| all["stats"]["label_totals"][l].as_u64().unwrap())
        .sum();
    assert_eq!(Value::from(linked), extract["counters"]["linked_kept"]);
    assert_eq!(all["stats"]["label_totals"]["neutral"], extract["counters"]["neutral_emitted"]);

    let split = d.join("split");
    let table = ok(&[
        "stats", "--pairs", s(&split.join("train.jsonl")), s(&split.join("val.jsonl")),
        s(&split.join("test.jsonl")), "--out", s(&d.join("splits.json")),
    ]);
    assert!(table.contains("| corpus"));
    let stats = json(&d.join("splits.json"));
    let report = json(&split.join("split_report.json"));
    for name in ["train", "val", "test"] {
        assert_eq!(stats["stats"]["split_totals"][name], report["counters"][format!("{name}_pairs")]);
    }
    for row in stats["stats"]["rows"].as_array().unwrap() {
        let per = &row["per_label"];
        assert!(["entailment", "neutral", "reasoning"].iter().all(|l| per[l] == per["contrasting"]));
    }
}

#[test]
fn stats_of_an_empty_file_are_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("test.jsonl");
    fs::write(&empty, "").unwrap();
    let table = ok(&["stats", "--pairs", s(&empty), "--out", s(&tmp.path().join("o.json"))]);
    assert!(table.contains("| total"));
    let o = json(&tmp.path().join("o.json"));
    assert_eq!(o["stats"]["total"], 0);
    assert!(o["stats"]["label_totals"].as_object().unwrap().values().all(|v| v == 0));
}

#[test]
fn validate_prints_retention_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let ann = repo().join("fixtures/annotations");
    let kept = tmp.path().join("kept.jsonl");
    let table = ok(&[
        "validate", "--pairs", s(&ann.join("pairs.jsonl")), "--annotations",
        s(&ann.join("annotations.jsonl")), "--out", s(&kept),
    ]);
    assert!(table.contains("Validated pairs per class"));
    assert!(table.contains("Validated pairs per genre"));
    assert_eq!(lines(&kept), 10);
    let report = json(&tmp.path().join("validate_report.json"));
    assert_eq!(report["counters"]["retained"], 10);
    assert_eq!(report["warnings"].as_array().unwrap().len(), 3);
}

#[test]
fn evaluate_writes_requested_breakdowns() {
    let tmp = tempfile::tempdir().unwrap();
    pipeline(tmp.path());
    let d = tmp.path();
    let model = d.join("model.json");
    ok(&["train-baseline", "--train", s(&d.join("split/train.jsonl")), "--out", s(&model), "--seed", "7"]);
    let train_report = json(&d.join("train_report.json"));
    assert_eq!(train_report["counters"]["model"], "lexical baseline (bag of words, multinomial logistic regression)");
    let table = ok(&[
        "evaluate", "--model", s(&model), "--pairs", s(&d.join("split/test.jsonl")),
        s(&d.join("stress/test_negation.jsonl")), "--manifest", s(&manifest()), "--by-genre",
        "--by-corpus", "--confusion", "--out", s(&d.join("eval.json")),
    ]);
    for heading in ["Confusion matrix: test", "Results by genre: test", "Results by corpus: test_negation"] {
        assert!(table.contains(heading), "missing {heading}");
    }
    let eval = json(&d.join("eval.json"));
    let results = eval["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    assert_eq!(results[0]["test_set"], "test");
    let ood = results[0]["report"]["out_of_domain"].as_object().unwrap();
    assert_eq!(ood.keys().collect::<Vec<_>>(), ["estalks__fixted"]);

    ok(&[
        "evaluate", "--majority", s(&d.join("split/train.jsonl")), "--pairs", s(&d.join("split/test.jsonl")),
        "--out", s(&d.join("majority.json")),
    ]);
    let majority = json(&d.join("majority.json"));
    assert_eq!(majority["results"][0]["report"]["accuracy"], 0.25);
}
