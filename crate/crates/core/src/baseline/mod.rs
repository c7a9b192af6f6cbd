//! Lexical baseline: bag-of-words features, a multinomial linear
//! classifier, evaluation reports, annotation filtering and token reports.

pub mod features;
pub mod metrics;
pub mod model;
pub mod tokens;
pub mod validation;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use features::{featurize, SparseVector, Vocabulary};
pub use metrics::{ConfusionMatrix, EvalReport, Outcome, Summary};
pub use model::{gradient_check, train, LinearModel, TrainParams};
pub use tokens::class_token_report;
pub use validation::{majority_filter, AnnotationRecord, ValidationReport};

use crate::error::Result;
use crate::extract::LabeledPair;
use crate::label::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub premise_only: bool,
    pub min_count: usize,
    pub max_vocab: usize,
    pub params: TrainParams,
    pub seed: u64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            premise_only: false,
            min_count: 2,
            max_vocab: 50_000,
            params: TrainParams::default(),
            seed: 0,
        }
    }
}

/// A trained lexical baseline with everything needed to featurize new pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineModel {
    pub kind: String,
    pub premise_only: bool,
    pub vocabulary: Vocabulary,
    pub model: LinearModel,
}

impl BaselineModel {
    pub fn train(train_pairs: &[LabeledPair], config: &BaselineConfig) -> Result<Self> {
        let vocabulary = Vocabulary::build(train_pairs, config.min_count, config.max_vocab);
        let xs: Vec<SparseVector> = train_pairs
            .iter()
            .map(|p| featurize(p, &vocabulary, config.premise_only))
            .collect();
        let ys: Vec<Label> = train_pairs.iter().map(|p| p.label).collect();
        let model = train(&xs, &ys, vocabulary.feature_dim(), config.params, config.seed)?;
        Ok(BaselineModel {
            kind: "lexical baseline (bag of words, multinomial logistic regression)".into(),
            premise_only: config.premise_only,
            vocabulary,
            model,
        })
    }

    /// Restores lookup tables after loading from disk.
    pub fn prepare(&mut self) {
        self.vocabulary.reindex();
    }

    pub fn predict(&self, pair: &LabeledPair) -> Label {
        self.model
            .predict(&featurize(pair, &self.vocabulary, self.premise_only))
    }

    pub fn evaluate(&self, pairs: &[LabeledPair], test_only: &BTreeSet<String>) -> EvalReport {
        use rayon::prelude::*;
        let predicted: Vec<Label> = pairs.par_iter().map(|p| self.predict(p)).collect();
        let outcomes: Vec<Outcome<'_>> = pairs
            .iter()
            .zip(predicted)
            .map(|(p, predicted)| Outcome {
                gold: p.label,
                predicted,
                genre: p.genre,
                corpus_id: &p.corpus_id,
            })
            .collect();
        EvalReport::from_outcomes(&outcomes, test_only)
    }
}

/// Evaluates a fixed-class predictor, as the majority-class reference.
pub fn evaluate_constant(
    pairs: &[LabeledPair],
    label: Label,
    test_only: &BTreeSet<String>,
) -> EvalReport {
    let outcomes: Vec<Outcome<'_>> = pairs
        .iter()
        .map(|p| Outcome {
            gold: p.label,
            predicted: label,
            genre: p.genre,
            corpus_id: &p.corpus_id,
        })
        .collect();
    EvalReport::from_outcomes(&outcomes, test_only)
}

/// Most frequent training label; ties go to the earlier class.
pub fn majority_label(pairs: &[LabeledPair]) -> Label {
    let mut counts = [0usize; 4];
    for p in pairs {
        counts[p.label.index()] += 1;
    }
    let mut best = 0;
    for c in 1..4 {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    Label::ALL[best]
}
