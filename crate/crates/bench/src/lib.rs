//! Shared inputs for the pipeline benchmarks.

use nlimine_core::extract::{extract_documents, ExtractConfig};
use nlimine_core::synth::{self, SynthConfig};
use nlimine_core::{BuiltinTagger, Document, Genre, LabeledPair, LinkingLexicon};

pub const SEED: u64 = 2024;

/// A synthetic news corpus of `n_docs` documents.
pub fn documents(n_docs: usize) -> Vec<Document> {
    synth::corpus("esnews__bench", Genre::News, n_docs, &SynthConfig::default(), SEED)
}

/// Every paragraph of [`documents`], flattened.
pub fn paragraphs(n_docs: usize) -> Vec<String> {
    documents(n_docs).into_iter().flat_map(|d| d.paragraphs).collect()
}

/// Linked and neutral pairs extracted from [`documents`].
pub fn pairs(n_docs: usize) -> Vec<LabeledPair> {
    let config = ExtractConfig { neutral_ratio: 1.0, seed: SEED };
    extract_documents(&documents(n_docs), &LinkingLexicon::default(), &BuiltinTagger, &config).pairs
}
