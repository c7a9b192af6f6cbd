//! Premise/hypothesis pair extraction.
//!
//! Linked pairs come from adjacent sentences of one paragraph where the
//! second sentence opens with a linking phrase. Neutral pairs join sentences
//! from different paragraphs of the same document.

use std::collections::{BTreeSet, HashSet};
use std::ops::AddAssign;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{self, CorpusManifest, Document, Loc, Sentence};
use crate::error::Result;
use crate::label::{Genre, Label};
use crate::lexicon::{strip_match, LinkingLexicon};
use crate::seed;
use crate::segment::segment_document;
use crate::tagger::{has_subject_and_predicate, SentenceKey, Tagger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeutralStrategy {
    /// Neither sentence was used by a linked pair.
    BothRandom,
    /// Used premise followed by an unused sentence.
    FirstRandom,
    /// Unused sentence followed by a used hypothesis.
    SecondRandom,
    /// Used premise followed by a used hypothesis.
    BothEntailed,
}

impl NeutralStrategy {
    pub const CYCLE: [NeutralStrategy; 4] = [
        NeutralStrategy::BothRandom,
        NeutralStrategy::FirstRandom,
        NeutralStrategy::SecondRandom,
        NeutralStrategy::BothEntailed,
    ];
}

/// One labeled pair with its provenance. Serializes to the pair-file record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPair {
    pub pair_id: String,
    pub premise: String,
    pub hypothesis: String,
    pub label: Label,
    pub corpus_id: String,
    pub genre: Genre,
    pub doc_id: String,
    pub premise_paragraph: usize,
    pub premise_sentence: usize,
    pub hypothesis_paragraph: usize,
    pub hypothesis_sentence: usize,
    pub matched_phrase: Option<String>,
    pub neutral_strategy: Option<NeutralStrategy>,
}

impl LabeledPair {
    pub fn premise_loc(&self) -> Loc {
        Loc::new(self.premise_paragraph, self.premise_sentence)
    }

    pub fn hypothesis_loc(&self) -> Loc {
        Loc::new(self.hypothesis_paragraph, self.hypothesis_sentence)
    }

    /// Ordering key of extraction output.
    pub fn sort_key(&self) -> (&str, &str, Loc, Loc, Label) {
        (
            &self.corpus_id,
            &self.doc_id,
            self.hypothesis_loc(),
            self.premise_loc(),
            self.label,
        )
    }
}

pub fn pair_id(corpus_id: &str, doc_id: &str, premise: Loc, hypothesis: Loc, label: Label) -> String {
    seed::stable_id(&[
        corpus_id,
        doc_id,
        &premise.paragraph.to_string(),
        &premise.sentence.to_string(),
        &hypothesis.paragraph.to_string(),
        &hypothesis.sentence.to_string(),
        label.as_str(),
    ])
}

/// Per-reason extraction counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractStats {
    pub documents: u64,
    pub sentences: u64,
    /// Sentences (not first in their paragraph) that open with a linking phrase.
    pub linked_candidates: u64,
    pub linked_kept: u64,
    pub filtered_by_pos: u64,
    pub degenerate_hypotheses: u64,
    pub identical_sentences: u64,
    pub neutral_target: u64,
    pub neutral_emitted: u64,
    pub neutral_shortfall: u64,
    pub malformed_records: u64,
}

impl ExtractStats {
    /// Every linked candidate is either kept or dropped for one reason.
    pub fn is_consistent(&self) -> bool {
        self.linked_candidates
            == self.linked_kept
                + self.filtered_by_pos
                + self.degenerate_hypotheses
                + self.identical_sentences
            && self.neutral_target == self.neutral_emitted + self.neutral_shortfall
    }
}

impl AddAssign for ExtractStats {
    fn add_assign(&mut self, o: Self) {
        self.documents += o.documents;
        self.sentences += o.sentences;
        self.linked_candidates += o.linked_candidates;
        self.linked_kept += o.linked_kept;
        self.filtered_by_pos += o.filtered_by_pos;
        self.degenerate_hypotheses += o.degenerate_hypotheses;
        self.identical_sentences += o.identical_sentences;
        self.neutral_target += o.neutral_target;
        self.neutral_emitted += o.neutral_emitted;
        self.neutral_shortfall += o.neutral_shortfall;
        self.malformed_records += o.malformed_records;
    }
}

/// A document split into sentences, with lazily shared helpers.
pub struct SegmentedDocument<'a> {
    pub doc: &'a Document,
    pub paragraphs: Vec<Vec<Sentence>>,
}

impl<'a> SegmentedDocument<'a> {
    pub fn new(doc: &'a Document) -> Self {
        SegmentedDocument {
            doc,
            paragraphs: segment_document(doc),
        }
    }

    pub fn sentence(&self, loc: Loc) -> &Sentence {
        &self.paragraphs[loc.paragraph][loc.sentence]
    }

    pub fn locations(&self) -> impl Iterator<Item = Loc> + '_ {
        self.paragraphs
            .iter()
            .enumerate()
            .flat_map(|(p, s)| (0..s.len()).map(move |i| Loc::new(p, i)))
    }

    fn complete(&self, loc: Loc, text: &str, tagger: &dyn Tagger) -> bool {
        let key = SentenceKey {
            doc_id: &self.doc.doc_id,
            loc,
        };
        has_subject_and_predicate(&tagger.tag(Some(key), text))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub pairs: Vec<LabeledPair>,
    pub stats: ExtractStats,
}

fn make_pair(
    doc: &Document,
    premise: (Loc, String),
    hypothesis: (Loc, String),
    label: Label,
    matched_phrase: Option<String>,
    neutral_strategy: Option<NeutralStrategy>,
) -> LabeledPair {
    LabeledPair {
        pair_id: pair_id(&doc.corpus_id, &doc.doc_id, premise.0, hypothesis.0, label),
        premise: premise.1,
        hypothesis: hypothesis.1,
        label,
        corpus_id: doc.corpus_id.clone(),
        genre: doc.genre,
        doc_id: doc.doc_id.clone(),
        premise_paragraph: premise.0.paragraph,
        premise_sentence: premise.0.sentence,
        hypothesis_paragraph: hypothesis.0.paragraph,
        hypothesis_sentence: hypothesis.0.sentence,
        matched_phrase,
        neutral_strategy,
    }
}

/// Linked pairs of a segmented document: the premise is the raw sentence
/// right before a phrase-initial sentence; the hypothesis is that sentence
/// with the phrase removed.
pub fn extract_linked(
    seg: &SegmentedDocument<'_>,
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
) -> Extraction {
    let doc = seg.doc;
    let mut out = Extraction::default();
    out.stats.documents = 1;
    for sentences in &seg.paragraphs {
        out.stats.sentences += sentences.len() as u64;
        for window in sentences.windows(2) {
            let (prev, cur) = (&window[0], &window[1]);
            let Some(m) = lexicon.match_start(&cur.text) else {
                continue;
            };
            out.stats.linked_candidates += 1;
            let Ok(hypothesis) = strip_match(&cur.text, &m) else {
                out.stats.degenerate_hypotheses += 1;
                continue;
            };
            if hypothesis == prev.text {
                out.stats.identical_sentences += 1;
                continue;
            }
            if !seg.complete(prev.loc(), &prev.text, tagger)
                || !seg.complete(cur.loc(), &hypothesis, tagger)
            {
                out.stats.filtered_by_pos += 1;
                continue;
            }
            out.stats.linked_kept += 1;
            out.pairs.push(make_pair(
                doc,
                (prev.loc(), prev.text.clone()),
                (cur.loc(), hypothesis),
                m.label,
                Some(m.phrase),
                None,
            ));
        }
    }
    out
}

pub fn extract_linked_pairs(
    doc: &Document,
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
) -> Extraction {
    extract_linked(&SegmentedDocument::new(doc), lexicon, tagger)
}

/// Text a sentence contributes to a neutral pair: any opening linking phrase
/// is removed so that it cannot act as a label cue.
pub fn neutral_text(sentence: &str, lexicon: &LinkingLexicon) -> String {
    lexicon
        .match_start(sentence)
        .and_then(|m| strip_match(sentence, &m).ok())
        .unwrap_or_else(|| sentence.to_string())
}

/// Candidate location pairs for one neutral strategy, in location order.
pub fn neutral_candidates(
    strategy: NeutralStrategy,
    unused: &[Loc],
    used_premises: &[Loc],
    used_hypotheses: &[Loc],
) -> Vec<(Loc, Loc)> {
    let (firsts, seconds) = match strategy {
        NeutralStrategy::BothRandom => (unused, unused),
        NeutralStrategy::FirstRandom => (used_premises, unused),
        NeutralStrategy::SecondRandom => (unused, used_hypotheses),
        NeutralStrategy::BothEntailed => (used_premises, used_hypotheses),
    };
    let mut out = Vec::new();
    for &p in firsts {
        for &h in seconds {
            if p.paragraph != h.paragraph {
                out.push((p, h));
            }
        }
    }
    out
}

/// Up to `target_count` neutral pairs, cycling over the four strategies and
/// skipping any whose candidate pool is exhausted.
#[allow(clippy::too_many_arguments)]
pub fn extract_neutral(
    seg: &SegmentedDocument<'_>,
    used_premises: &BTreeSet<Loc>,
    used_hypotheses: &BTreeSet<Loc>,
    target_count: usize,
    rng_seed: u64,
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
) -> Extraction {
    let mut out = Extraction::default();
    out.stats.neutral_target = target_count as u64;
    if target_count == 0 || seg.paragraphs.len() < 2 {
        out.stats.neutral_shortfall = target_count as u64;
        return out;
    }

    let texts: Vec<(Loc, String, bool)> = seg
        .locations()
        .map(|loc| {
            let text = neutral_text(&seg.sentence(loc).text, lexicon);
            let ok = seg.complete(loc, &text, tagger);
            (loc, text, ok)
        })
        .collect();
    let text_of = |loc: Loc| -> &str {
        &texts
            .iter()
            .find(|(l, _, _)| *l == loc)
            .expect("location exists")
            .1
    };
    let complete = |loc: &Loc| texts.iter().any(|(l, _, ok)| l == loc && *ok);

    let unused: Vec<Loc> = texts
        .iter()
        .filter(|(l, _, ok)| *ok && !used_premises.contains(l) && !used_hypotheses.contains(l))
        .map(|(l, _, _)| *l)
        .collect();
    let up: Vec<Loc> = used_premises.iter().copied().filter(complete).collect();
    let uh: Vec<Loc> = used_hypotheses.iter().copied().filter(complete).collect();

    let mut pools: Vec<Vec<(Loc, Loc)>> = NeutralStrategy::CYCLE
        .iter()
        .map(|&s| {
            neutral_candidates(s, &unused, &up, &uh)
                .into_iter()
                .filter(|&(p, h)| text_of(p) != text_of(h))
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut seen: HashSet<(Loc, Loc)> = HashSet::new();
    let mut slot = 0;
    while out.pairs.len() < target_count && pools.iter().any(|p| !p.is_empty()) {
        let pool = &mut pools[slot];
        if pool.is_empty() {
            slot = (slot + 1) % pools.len();
            continue;
        }
        let (p, h) = pool.swap_remove(rng.gen_range(0..pool.len()));
        let unordered = if p <= h { (p, h) } else { (h, p) };
        if !seen.insert(unordered) {
            continue;
        }
        out.pairs.push(make_pair(
            seg.doc,
            (p, text_of(p).to_string()),
            (h, text_of(h).to_string()),
            Label::Neutral,
            None,
            Some(NeutralStrategy::CYCLE[slot]),
        ));
        slot = (slot + 1) % pools.len();
    }
    out.stats.neutral_emitted = out.pairs.len() as u64;
    out.stats.neutral_shortfall = (target_count - out.pairs.len()) as u64;
    out
}

pub fn extract_neutral_pairs(
    doc: &Document,
    used_premises: &BTreeSet<Loc>,
    used_hypotheses: &BTreeSet<Loc>,
    target_count: usize,
    rng_seed: u64,
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
) -> Extraction {
    extract_neutral(
        &SegmentedDocument::new(doc),
        used_premises,
        used_hypotheses,
        target_count,
        rng_seed,
        lexicon,
        tagger,
    )
}

#[derive(Debug, Clone, Copy)]
pub struct ExtractConfig {
    /// Neutral pairs requested per linked pair, per document.
    pub neutral_ratio: f64,
    pub seed: u64,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig {
            neutral_ratio: 1.0,
            seed: 0,
        }
    }
}

/// Linked then neutral pairs for one document.
pub fn extract_document(
    doc: &Document,
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
    config: &ExtractConfig,
) -> Extraction {
    let seg = SegmentedDocument::new(doc);
    let mut linked = extract_linked(&seg, lexicon, tagger);
    let used_premises: BTreeSet<Loc> = linked.pairs.iter().map(LabeledPair::premise_loc).collect();
    let used_hypotheses: BTreeSet<Loc> =
        linked.pairs.iter().map(LabeledPair::hypothesis_loc).collect();
    let target = (config.neutral_ratio * linked.pairs.len() as f64).round() as usize;
    let rng_seed = seed::derive_seed(config.seed, &[&doc.corpus_id, &doc.doc_id]);
    let neutral = extract_neutral(
        &seg,
        &used_premises,
        &used_hypotheses,
        target,
        rng_seed,
        lexicon,
        tagger,
    );
    linked.pairs.extend(neutral.pairs);
    linked.stats += neutral.stats;
    linked
}

/// Extracts every document in parallel; output is sorted by
/// (corpus, document, hypothesis location, premise location, label).
pub fn extract_documents(
    docs: &[Document],
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
    config: &ExtractConfig,
) -> Extraction {
    let parts: Vec<Extraction> = docs
        .par_iter()
        .map(|d| extract_document(d, lexicon, tagger, config))
        .collect();
    let mut out = Extraction::default();
    for part in parts {
        out.pairs.extend(part.pairs);
        out.stats += part.stats;
    }
    out.pairs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

pub fn extract_corpus(
    manifest: &CorpusManifest,
    lexicon: &LinkingLexicon,
    tagger: &dyn Tagger,
    config: &ExtractConfig,
) -> Result<Extraction> {
    let loaded = corpus::load_corpus(manifest)?;
    let mut out = extract_documents(&loaded.documents, lexicon, tagger, config);
    out.stats.malformed_records = loaded.skipped as u64;
    Ok(out)
}
