//! Bag-of-words features with separate premise and hypothesis blocks.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::extract::LabeledPair;

/// Lowercased alphanumeric runs; punctuation is dropped.
pub fn bow_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    tokens: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    pub min_count: usize,
    pub max_size: usize,
}

impl Vocabulary {
    /// Builds the vocabulary from training pairs only. Tokens are ranked by
    /// frequency, ties broken lexicographically.
    pub fn build<'a, I>(pairs: I, min_count: usize, max_size: usize) -> Self
    where
        I: IntoIterator<Item = &'a LabeledPair>,
    {
        let mut counts: HashMap<String, usize> = HashMap::new();
        for p in pairs {
            for t in bow_tokens(&p.premise).chain(bow_tokens(&p.hypothesis)) {
                *counts.entry(t).or_default() += 1;
            }
        }
        let mut ranked: Vec<(String, usize)> =
            counts.into_iter().filter(|(_, c)| *c >= min_count).collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(max_size);
        Vocabulary::from_tokens(ranked.into_iter().map(|(t, _)| t).collect(), min_count, max_size)
    }

    pub fn from_tokens(tokens: Vec<String>, min_count: usize, max_size: usize) -> Self {
        let mut v = Vocabulary {
            tokens,
            index: HashMap::new(),
            min_count,
            max_size,
        };
        v.reindex();
        v
    }

    /// Rebuilds the lookup table; needed after deserialization.
    pub fn reindex(&mut self) {
        self.index = self
            .tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<usize> {
        self.index.get(token).copied()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Feature dimension: one block for the premise, one for the hypothesis.
    pub fn feature_dim(&self) -> usize {
        2 * self.len()
    }
}

/// Sparse vector of (index, value), sorted by index without duplicates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector(pub Vec<(usize, f64)>);

impl SparseVector {
    pub fn from_indices(mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(idx.len());
        for i in idx {
            match out.last_mut() {
                Some((j, v)) if *j == i => *v += 1.0,
                _ => out.push((i, 1.0)),
            }
        }
        SparseVector(out)
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        SparseVector(
            dense
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| (i, *v))
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().copied()
    }

    pub fn sum_range(&self, range: std::ops::Range<usize>) -> f64 {
        self.0
            .iter()
            .filter(|(i, _)| range.contains(i))
            .map(|(_, v)| v)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|(_, v)| *v == 0.0)
    }
}

/// Token counts of the premise (first block) and hypothesis (second block).
/// In premise-only mode the hypothesis block is left empty.
pub fn featurize(pair: &LabeledPair, vocab: &Vocabulary, premise_only: bool) -> SparseVector {
    let n = vocab.len();
    let mut idx: Vec<usize> = bow_tokens(&pair.premise).filter_map(|t| vocab.get(&t)).collect();
    if !premise_only {
        idx.extend(bow_tokens(&pair.hypothesis).filter_map(|t| vocab.get(&t)).map(|i| n + i));
    }
    SparseVector::from_indices(idx)
}
