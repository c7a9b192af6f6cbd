//! Document-level train/val/test assignment and per-cell class balancing.
//!
//! A cell is one (split, corpus) combination. Documents are assigned whole,
//! so no premise or hypothesis is ever shared between splits, and each cell
//! is then downsampled to its rarest class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::LabeledPair;
use crate::label::{Genre, Label};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Val, Split::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub test_fraction: f64,
    pub val_fraction_of_remainder: f64,
    pub val_cap_per_corpus: usize,
    pub test_cap_per_corpus: usize,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            test_fraction: 0.1,
            val_fraction_of_remainder: 0.1,
            val_cap_per_corpus: 15_000,
            test_cap_per_corpus: 15_000,
            seed: 0,
        }
    }
}

impl SplitConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, f) in [
            ("test fraction", self.test_fraction),
            ("validation fraction", self.val_fraction_of_remainder),
        ] {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {f}")));
            }
        }
        if self.val_cap_per_corpus < 4 || self.test_cap_per_corpus < 4 {
            return Err(Error::Config(
                "per-corpus caps must allow at least one example per class (>= 4)".into(),
            ));
        }
        Ok(())
    }

    /// Maximum examples per class in one cell of `split`.
    pub fn per_class_cap(&self, split: Split) -> Option<usize> {
        match split {
            Split::Train => None,
            Split::Val => Some(self.val_cap_per_corpus / 4),
            Split::Test => Some(self.test_cap_per_corpus / 4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocumentRef {
    pub corpus_id: String,
    pub doc_id: String,
    pub test_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub corpus_id: String,
    pub doc_id: String,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCount {
    pub split: Split,
    pub corpus_id: String,
    pub label: Label,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenreCount {
    pub split: Split,
    pub genre: Genre,
    pub count: usize,
}

/// Document → split assignment plus per-cell example counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitManifest {
    pub assignment: Vec<AssignmentRecord>,
    pub counts: Vec<CellCount>,
    pub genre_counts: Vec<GenreCount>,
    pub warnings: Vec<String>,
}

impl SplitManifest {
    pub fn assignment_map(&self) -> BTreeMap<(&str, &str), Split> {
        self.assignment
            .iter()
            .map(|a| ((a.corpus_id.as_str(), a.doc_id.as_str()), a.split))
            .collect()
    }

    pub fn split_of(&self, corpus_id: &str, doc_id: &str) -> Option<Split> {
        self.assignment
            .binary_search_by(|a| (a.corpus_id.as_str(), a.doc_id.as_str()).cmp(&(corpus_id, doc_id)))
            .ok()
            .map(|i| self.assignment[i].split)
    }

    pub fn count(&self, split: Split, corpus_id: &str, label: Label) -> usize {
        self.counts
            .iter()
            .find(|c| c.split == split && c.corpus_id == corpus_id && c.label == label)
            .map_or(0, |c| c.count)
    }
}

fn ceil_frac(n: usize, frac: f64) -> usize {
    ((n as f64) * frac).ceil().min(n as f64) as usize
}

/// Assigns every document to one split. Test-only corpora go entirely to
/// test; other corpora are shuffled per corpus, the test share is taken
/// first, then the validation share of what remains.
pub fn assign_documents(docs: &[DocumentRef], config: &SplitConfig) -> Result<SplitManifest> {
    config.validate()?;
    if docs.is_empty() {
        return Err(Error::Config("no documents to split".into()));
    }
    let mut by_corpus: BTreeMap<&str, (bool, BTreeSet<&str>)> = BTreeMap::new();
    for d in docs {
        let entry = by_corpus
            .entry(d.corpus_id.as_str())
            .or_insert((d.test_only, BTreeSet::new()));
        entry.0 |= d.test_only;
        entry.1.insert(d.doc_id.as_str());
    }

    let mut manifest = SplitManifest::default();
    for (corpus_id, (test_only, ids)) in by_corpus {
        let mut ids: Vec<&str> = ids.into_iter().collect();
        let push = |m: &mut SplitManifest, ids: &[&str], split: Split| {
            m.assignment.extend(ids.iter().map(|d| AssignmentRecord {
                corpus_id: corpus_id.to_string(),
                doc_id: d.to_string(),
                split,
            }))
        };
        if test_only {
            push(&mut manifest, &ids, Split::Test);
            continue;
        }
        if ids.len() < 3 {
            manifest.warnings.push(format!(
                "corpus `{corpus_id}` has only {} document(s); all assigned to train",
                ids.len()
            ));
            push(&mut manifest, &ids, Split::Train);
            continue;
        }
        let mut rng = seed::rng_for(config.seed, &["assign", corpus_id]);
        ids.shuffle(&mut rng);
        let n_test = ceil_frac(ids.len(), config.test_fraction);
        let n_val = ceil_frac(ids.len() - n_test, config.val_fraction_of_remainder);
        let (test, rest) = ids.split_at(n_test);
        let (val, train) = rest.split_at(n_val);
        push(&mut manifest, test, Split::Test);
        push(&mut manifest, val, Split::Val);
        push(&mut manifest, train, Split::Train);
    }
    manifest
        .assignment
        .sort_by(|a, b| (&a.corpus_id, &a.doc_id).cmp(&(&b.corpus_id, &b.doc_id)));
    Ok(manifest)
}

/// Balanced output of [`balance_split`], sorted by (split, corpus, pair id).
#[derive(Debug, Clone, Default)]
pub struct BalancedSplit {
    pub pairs: Vec<(Split, LabeledPair)>,
}

impl BalancedSplit {
    pub fn split(&self, split: Split) -> impl Iterator<Item = &LabeledPair> {
        self.pairs
            .iter()
            .filter(move |(s, _)| *s == split)
            .map(|(_, p)| p)
    }
}

/// Downsamples every (split, corpus) cell to `m'` examples per class, where
/// `m` is the rarest class count of the cell and `m' = min(m, cap / 4)` for
/// validation and test. Fills the manifest's counts and warnings.
pub fn balance_split(
    pairs: &[LabeledPair],
    manifest: &mut SplitManifest,
    config: &SplitConfig,
) -> Result<BalancedSplit> {
    config.validate()?;
    let lookup = manifest.assignment_map();
    type Cell<'a> = (Split, &'a str);
    let mut cells: BTreeMap<Cell<'_>, [Vec<&LabeledPair>; 4]> = BTreeMap::new();
    for p in pairs {
        let split = *lookup
            .get(&(p.corpus_id.as_str(), p.doc_id.as_str()))
            .ok_or_else(|| {
                Error::Config(format!(
                    "pair {} belongs to unassigned document {}/{}",
                    p.pair_id, p.corpus_id, p.doc_id
                ))
            })?;
        cells.entry((split, p.corpus_id.as_str())).or_default()[p.label.index()].push(p);
    }

    let mut out = Vec::new();
    let mut counts = Vec::new();
    let mut genre_totals: BTreeMap<(Split, Genre), usize> = BTreeMap::new();
    let mut warnings = Vec::new();
    for ((split, corpus_id), mut by_label) in cells {
        let m = by_label.iter().map(Vec::len).min().unwrap_or(0);
        if m == 0 {
            let missing: Vec<&str> = Label::ALL
                .iter()
                .filter(|l| by_label[l.index()].is_empty())
                .map(|l| l.as_str())
                .collect();
            warnings.push(format!(
                "{split}/{corpus_id}: no {} pairs; cell dropped",
                missing.join(", ")
            ));
        }
        let keep = config.per_class_cap(split).map_or(m, |cap| m.min(cap));
        for label in Label::ALL {
            let bucket = &mut by_label[label.index()];
            bucket.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));
            let mut rng = seed::rng_for(
                config.seed,
                &["balance", split.as_str(), corpus_id, label.as_str()],
            );
            bucket.shuffle(&mut rng);
            for p in bucket.iter().take(keep) {
                *genre_totals.entry((split, p.genre)).or_default() += 1;
                out.push((split, (*p).clone()));
            }
            counts.push(CellCount {
                split,
                corpus_id: corpus_id.to_string(),
                label,
                count: keep,
            });
        }
    }
    out.sort_by(|(sa, a), (sb, b)| (sa, &a.corpus_id, &a.pair_id).cmp(&(sb, &b.corpus_id, &b.pair_id)));
    counts.sort_by(|a, b| (a.split, &a.corpus_id, a.label).cmp(&(b.split, &b.corpus_id, b.label)));
    manifest.counts = counts;
    manifest.genre_counts = genre_totals
        .into_iter()
        .map(|((split, genre), count)| GenreCount {
            split,
            genre,
            count,
        })
        .collect();
    manifest.warnings.extend(warnings);
    Ok(BalancedSplit { pairs: out })
}

/// Documents referenced by `pairs`, flagged from the set of test-only corpora.
pub fn documents_of(pairs: &[LabeledPair], test_only: &BTreeSet<String>) -> Vec<DocumentRef> {
    let set: BTreeSet<(&str, &str)> = pairs
        .iter()
        .map(|p| (p.corpus_id.as_str(), p.doc_id.as_str()))
        .collect();
    set.into_iter()
        .map(|(c, d)| DocumentRef {
            corpus_id: c.to_string(),
            doc_id: d.to_string(),
            test_only: test_only.contains(c),
        })
        .collect()
}
