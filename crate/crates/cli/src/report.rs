//! Run reports and the human-readable tables printed by each subcommand.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use nlimine_core::baseline::{EvalReport, ValidationReport};
use nlimine_core::{Genre, Label, LabeledPair};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::table::{fmt_score, Table};

/// Digest of one input file. Only the file name is recorded so reports stay
/// identical across working directories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub role: String,
    pub file: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(role: &str, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(InputDigest {
            role: role.into(),
            file: path
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub seed: Option<u64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub inputs: Vec<InputDigest>,
    pub counters: Map<String, Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub cells: Value,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(subcommand: &str, seed: Option<u64>) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            seed,
            status: "ok".into(),
            error: None,
            inputs: Vec::new(),
            counters: Map::new(),
            cells: Value::Null,
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, role: &str, path: &Path) -> Result<()> {
        self.inputs.push(InputDigest::of(role, path)?);
        Ok(())
    }

    pub fn count(&mut self, key: &str, value: impl Into<Value>) {
        self.counters.insert(key.into(), value.into());
    }

    /// Merges the fields of a serializable struct into the counters.
    pub fn count_all<T: Serialize>(&mut self, stats: &T) -> Result<()> {
        if let Value::Object(m) = serde_json::to_value(stats)? {
            self.counters.extend(m);
        }
        Ok(())
    }
}

/// Example counts by (corpus, genre) row and split/label column.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    /// Column order, as the files were given.
    pub splits: Vec<String>,
    pub rows: Vec<CorpusRow>,
    pub genre_totals: BTreeMap<Genre, usize>,
    pub split_totals: BTreeMap<String, usize>,
    pub label_totals: BTreeMap<Label, usize>,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub corpus_id: String,
    pub genre: Genre,
    pub per_split: BTreeMap<String, usize>,
    pub per_label: BTreeMap<Label, usize>,
    pub total: usize,
}

impl DatasetStats {
    pub fn from_files(files: &[(String, Vec<LabeledPair>)]) -> Self {
        let mut rows: BTreeMap<&str, CorpusRow> = BTreeMap::new();
        let mut s = DatasetStats::default();
        for (split, pairs) in files {
            if !s.splits.contains(split) {
                s.splits.push(split.clone());
            }
            s.split_totals.entry(split.clone()).or_default();
            for p in pairs {
                let row = rows.entry(&p.corpus_id).or_insert_with(|| CorpusRow {
                    corpus_id: p.corpus_id.clone(),
                    genre: p.genre,
                    per_split: BTreeMap::new(),
                    per_label: Label::ALL.iter().map(|l| (*l, 0)).collect(),
                    total: 0,
                });
                *row.per_split.entry(split.clone()).or_default() += 1;
                *row.per_label.entry(p.label).or_default() += 1;
                row.total += 1;
                *s.genre_totals.entry(p.genre).or_default() += 1;
                *s.split_totals.entry(split.clone()).or_default() += 1;
                *s.label_totals.entry(p.label).or_default() += 1;
                s.total += 1;
            }
        }
        for l in Label::ALL {
            s.label_totals.entry(l).or_default();
        }
        s.rows = rows.into_values().collect();
        s
    }

    pub fn render(&self) -> String {
        let splits: Vec<&String> = self.splits.iter().collect();
        let mut header: Vec<String> = vec!["corpus".into(), "genre".into()];
        header.extend(splits.iter().map(|s| s.to_string()));
        header.extend(Label::ALL.iter().map(|l| l.to_string()));
        header.push("total".into());
        let mut t = Table::new("Examples per corpus", header);
        for r in &self.rows {
            let mut cells = vec![r.corpus_id.clone(), r.genre.to_string()];
            cells.extend(splits.iter().map(|s| r.per_split.get(*s).copied().unwrap_or(0).to_string()));
            cells.extend(Label::ALL.iter().map(|l| r.per_label[l].to_string()));
            cells.push(r.total.to_string());
            t.row(cells);
        }
        let mut cells = vec!["total".to_string(), String::new()];
        cells.extend(splits.iter().map(|s| self.split_totals[*s].to_string()));
        cells.extend(Label::ALL.iter().map(|l| self.label_totals[l].to_string()));
        cells.push(self.total.to_string());
        t.row(cells);

        let mut g = Table::new("Examples per genre", ["genre", "examples"]);
        for (genre, n) in &self.genre_totals {
            g.row([genre.to_string(), n.to_string()]);
        }
        format!("{}\n{}", t.render(), g.render())
    }
}

/// Accuracy and macro-F1 per evaluated file.
pub fn render_summary(model: &str, reports: &[(String, EvalReport)]) -> String {
    let mut t = Table::new(format!("Model: {model}"), ["test set", "examples", "accuracy", "f1 macro"]);
    for (name, r) in reports {
        t.row([name.clone(), r.n.to_string(), fmt_score(r.accuracy), fmt_score(r.macro_f1)]);
    }
    t.render()
}

pub fn render_per_class(name: &str, r: &EvalReport) -> String {
    let mut t = Table::new(format!("Per-class results: {name}"), ["class", "accuracy", "f1"]);
    for l in Label::ALL {
        t.row([l.to_string(), fmt_score(r.per_class_accuracy[&l]), fmt_score(r.per_class_f1[&l])]);
    }
    t.render()
}

pub fn render_confusion(name: &str, r: &EvalReport) -> String {
    let mut header = vec!["gold \\ predicted".to_string()];
    header.extend(Label::ALL.iter().map(|l| l.to_string()));
    let mut t = Table::new(format!("Confusion matrix: {name}"), header);
    for l in Label::ALL {
        let mut cells = vec![l.to_string()];
        cells.extend(r.confusion_matrix.0[l.index()].iter().map(|n| n.to_string()));
        t.row(cells);
    }
    t.render()
}

pub fn render_by_genre(name: &str, r: &EvalReport) -> String {
    let mut t = Table::new(format!("Results by genre: {name}"), ["genre", "examples", "accuracy", "f1 macro"]);
    for (g, s) in &r.per_genre {
        t.row([g.to_string(), s.n.to_string(), fmt_score(s.accuracy), fmt_score(s.macro_f1)]);
    }
    t.render()
}

pub fn render_by_corpus(name: &str, r: &EvalReport) -> String {
    let mut t = Table::new(
        format!("Results by corpus: {name}"),
        ["corpus", "out of domain", "examples", "accuracy", "f1 macro"],
    );
    for (c, s) in &r.per_corpus {
        let ood = if r.out_of_domain.contains_key(c) { "yes" } else { "no" };
        t.row([c.clone(), ood.into(), s.n.to_string(), fmt_score(s.accuracy), fmt_score(s.macro_f1)]);
    }
    t.render()
}

pub fn render_validation(r: &ValidationReport, annotated_per_class: &BTreeMap<Label, usize>, annotated_per_genre: &BTreeMap<Genre, usize>) -> String {
    let pct = |kept: usize, of: usize| {
        if of == 0 {
            "-".to_string()
        } else {
            format!("{:.1}%", 100.0 * kept as f64 / of as f64)
        }
    };
    let mut c = Table::new("Validated pairs per class", ["class", "pairs", "retained", "retained %"]);
    for l in Label::ALL {
        let of = annotated_per_class.get(&l).copied().unwrap_or(0);
        let kept = r.retained_per_class.get(&l).copied().unwrap_or(0);
        c.row([l.to_string(), of.to_string(), kept.to_string(), pct(kept, of)]);
    }
    c.row(["total".to_string(), r.total.to_string(), r.retained.to_string(), pct(r.retained, r.total)]);
    let mut g = Table::new("Validated pairs per genre", ["genre", "pairs", "retained", "retained %"]);
    for (genre, of) in annotated_per_genre {
        let kept = r.retained_per_genre.get(genre).copied().unwrap_or(0);
        g.row([genre.to_string(), of.to_string(), kept.to_string(), pct(kept, *of)]);
    }
    let mut d = Table::new("Dropped pairs", ["reason", "pairs"]);
    d.row(["no annotations".to_string(), r.dropped_unannotated.to_string()]);
    d.row(["no strict majority".to_string(), r.dropped_no_majority.to_string()]);
    d.row(["majority disagrees".to_string(), r.dropped_disagreement.to_string()]);
    format!("{}\n{}\n{}", c.render(), g.render(), d.render())
}

pub fn render_tokens(report: &BTreeMap<Label, Vec<(String, usize)>>) -> String {
    let mut out = Vec::new();
    for (l, ranked) in report {
        let mut t = Table::new(format!("Most frequent tokens: {l}"), ["token", "count"]);
        for (tok, n) in ranked {
            t.row([tok.clone(), n.to_string()]);
        }
        out.push(t.render());
    }
    out.join("\n")
}

/// Column name for a pairs file: its file stem (`train`, `val`, `test`, ...).
pub fn split_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}
