//! Straight-line reference for pair extraction, written without the
//! library's matcher: accent folding, phrase matching and stripping are
//! redone here word by word.

#![allow(dead_code)]

use std::collections::BTreeSet;

use nlimine_core::segment::segment_document;
use nlimine_core::tagger::is_complete;
use nlimine_core::{Document, Label, LinkingLexicon, Loc, Tagger};

pub fn fold(text: &str) -> String {
    let mapped: String = text
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            'á' | 'à' | 'â' | 'ä' => 'a',
            'é' | 'è' | 'ê' | 'ë' => 'e',
            'í' | 'ì' | 'î' | 'ï' => 'i',
            'ó' | 'ò' | 'ô' | 'ö' => 'o',
            'ú' | 'ù' | 'û' | 'ü' => 'u',
            other => other,
        })
        .collect();
    mapped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Longest phrase of any class that opens the sentence on a word boundary.
pub fn match_phrase(sentence: &str, lexicon: &LinkingLexicon) -> Option<(Label, String)> {
    let folded = fold(sentence);
    let mut best: Option<(Label, String)> = None;
    for label in Label::LINKED {
        for phrase in lexicon.phrases(label) {
            let Some(rest) = folded.strip_prefix(phrase.as_str()) else {
                continue;
            };
            if rest.chars().next().is_some_and(char::is_alphanumeric) {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| phrase.len() > b.len()) {
                best = Some((label, phrase.clone()));
            }
        }
    }
    best
}

/// Drops as many leading words as the phrase has, then a comma or colon and
/// spaces; `None` when nothing alphanumeric is left.
pub fn strip(sentence: &str, phrase: &str) -> Option<String> {
    let words = phrase.split(' ').count();
    let mut rest = sentence.trim_start();
    for _ in 0..words {
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        let word = &rest[..end];
        // a trailing ',' or ':' glued to the last word stays for the next step
        let keep = word.len() - word.trim_end_matches([',', ':', '.', ';']).len();
        rest = &rest[end - keep..];
        rest = rest.trim_start();
    }
    let rest = rest.strip_prefix([',', ':']).unwrap_or(rest).trim_start();
    if !rest.chars().any(char::is_alphanumeric) {
        return None;
    }
    let mut chars = rest.chars();
    let first = chars.next()?;
    Some(first.to_uppercase().chain(chars).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReferencePair {
    pub premise_loc: Loc,
    pub hypothesis_loc: Loc,
    pub label: Label,
    pub phrase: String,
    pub premise: String,
    pub hypothesis: String,
}

pub fn linked_pairs(doc: &Document, lexicon: &LinkingLexicon, tagger: &dyn Tagger) -> Vec<ReferencePair> {
    let mut out = Vec::new();
    for sentences in segment_document(doc) {
        for i in 1..sentences.len() {
            let (prev, cur) = (&sentences[i - 1], &sentences[i]);
            let Some((label, phrase)) = match_phrase(&cur.text, lexicon) else {
                continue;
            };
            let Some(hypothesis) = strip(&cur.text, &phrase) else {
                continue;
            };
            if hypothesis == prev.text || !is_complete(&prev.text, tagger) || !is_complete(&hypothesis, tagger) {
                continue;
            }
            out.push(ReferencePair {
                premise_loc: prev.loc(),
                hypothesis_loc: cur.loc(),
                label,
                phrase,
                premise: prev.text.clone(),
                hypothesis,
            });
        }
    }
    out
}

/// Distinct unordered cross-paragraph location pairs any neutral strategy
/// could draw from.
pub fn neutral_pool(doc: &Document, linked: &[ReferencePair], lexicon: &LinkingLexicon, tagger: &dyn Tagger) -> BTreeSet<(Loc, Loc)> {
    let used_p: BTreeSet<Loc> = linked.iter().map(|p| p.premise_loc).collect();
    let used_h: BTreeSet<Loc> = linked.iter().map(|p| p.hypothesis_loc).collect();
    let sentences = segment_document(doc);
    let text = |l: Loc| {
        let raw = &sentences[l.paragraph][l.sentence].text;
        match match_phrase(raw, lexicon) {
            Some((_, phrase)) => strip(raw, &phrase).unwrap_or_else(|| raw.clone()),
            None => raw.clone(),
        }
    };
    let locs: Vec<Loc> = sentences
        .iter()
        .enumerate()
        .flat_map(|(p, s)| (0..s.len()).map(move |i| Loc::new(p, i)))
        .filter(|&l| is_complete(&text(l), tagger))
        .collect();
    let unused = |l: &Loc| !used_p.contains(l) && !used_h.contains(l);
    let mut pool = BTreeSet::new();
    for &a in &locs {
        for &b in &locs {
            if a.paragraph == b.paragraph || text(a) == text(b) {
                continue;
            }
            let allowed = (unused(&a) && unused(&b))
                || (used_p.contains(&a) && unused(&b))
                || (unused(&a) && used_h.contains(&b))
                || (used_p.contains(&a) && used_h.contains(&b));
            if allowed {
                pool.insert(if a <= b { (a, b) } else { (b, a) });
            }
        }
    }
    pool
}
