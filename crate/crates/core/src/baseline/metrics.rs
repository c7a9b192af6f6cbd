//! Accuracy, macro-F1, per-class accuracy and confusion matrices.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::label::{Genre, Label};

/// Rows are gold classes, columns predicted classes, both in [`Label::ALL`] order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix(pub [[u64; 4]; 4]);

impl ConfusionMatrix {
    pub fn add(&mut self, gold: Label, predicted: Label) {
        self.0[gold.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn row_sum(&self, c: usize) -> u64 {
        self.0[c].iter().sum()
    }

    pub fn col_sum(&self, c: usize) -> u64 {
        self.0.iter().map(|r| r[c]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.trace(), self.total())
    }

    /// Correct predictions of class `c` over its gold count (recall).
    pub fn class_accuracy(&self, c: usize) -> f64 {
        ratio(self.0[c][c], self.row_sum(c))
    }

    /// F1 of class `c`; any 0/0 is taken as 0.
    pub fn class_f1(&self, c: usize) -> f64 {
        let tp = self.0[c][c];
        let precision = ratio(tp, self.col_sum(c));
        let recall = ratio(tp, self.row_sum(c));
        if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        }
    }

    /// Unweighted mean of the four per-class F1 scores.
    pub fn macro_f1(&self) -> f64 {
        (0..4).map(|c| self.class_f1(c)).sum::<f64>() / 4.0
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: u64,
    pub accuracy: f64,
    pub macro_f1: f64,
}

impl From<&ConfusionMatrix> for Summary {
    fn from(m: &ConfusionMatrix) -> Self {
        Summary {
            n: m.total(),
            accuracy: m.accuracy(),
            macro_f1: m.macro_f1(),
        }
    }
}

/// One evaluated example.
#[derive(Debug, Clone, Copy)]
pub struct Outcome<'a> {
    pub gold: Label,
    pub predicted: Label,
    pub genre: Genre,
    pub corpus_id: &'a str,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: u64,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class_accuracy: BTreeMap<Label, f64>,
    pub per_class_f1: BTreeMap<Label, f64>,
    pub confusion_matrix: ConfusionMatrix,
    pub per_genre: BTreeMap<Genre, Summary>,
    pub per_corpus: BTreeMap<String, Summary>,
    /// Subset of `per_corpus` for corpora never seen in training.
    pub out_of_domain: BTreeMap<String, Summary>,
}

impl EvalReport {
    pub fn from_outcomes(outcomes: &[Outcome<'_>], test_only: &BTreeSet<String>) -> Self {
        let mut all = ConfusionMatrix::default();
        let mut genres: BTreeMap<Genre, ConfusionMatrix> = BTreeMap::new();
        let mut corpora: BTreeMap<&str, ConfusionMatrix> = BTreeMap::new();
        for o in outcomes {
            all.add(o.gold, o.predicted);
            genres.entry(o.genre).or_default().add(o.gold, o.predicted);
            corpora.entry(o.corpus_id).or_default().add(o.gold, o.predicted);
        }
        let per_corpus: BTreeMap<String, Summary> = corpora
            .iter()
            .map(|(c, m)| (c.to_string(), Summary::from(m)))
            .collect();
        EvalReport {
            n: all.total(),
            accuracy: all.accuracy(),
            macro_f1: all.macro_f1(),
            per_class_accuracy: Label::ALL
                .iter()
                .map(|l| (*l, all.class_accuracy(l.index())))
                .collect(),
            per_class_f1: Label::ALL
                .iter()
                .map(|l| (*l, all.class_f1(l.index())))
                .collect(),
            confusion_matrix: all,
            per_genre: genres.iter().map(|(g, m)| (*g, Summary::from(m))).collect(),
            out_of_domain: per_corpus
                .iter()
                .filter(|(c, _)| test_only.contains(*c))
                .map(|(c, s)| (c.clone(), s.clone()))
                .collect(),
            per_corpus,
        }
    }
}
