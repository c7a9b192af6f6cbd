//! Class → linking-phrase lexicon and sentence-initial phrase matching.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::io;
use crate::label::Label;

pub const CONTRASTING_PHRASES: [&str; 8] = [
    "sin embargo",
    "no obstante",
    "por otra parte",
    "por otro lado",
    "en cambio",
    "por el contrario",
    "al contrario",
    "en contraste",
];

pub const ENTAILMENT_PHRASES: [&str; 31] = [
    "en concreto",
    "concretamente",
    "especificamente",
    "precisamente",
    "en particular",
    "particularmente",
    "en especial",
    "es decir",
    "en otras palabras",
    "dicho de otra manera",
    "dicho de otro modo",
    "en otros terminos",
    "de hecho",
    "esto es",
    "o sea",
    "mejor dicho",
    "sobre todo",
    "justamente",
    "en resumidas cuentas",
    "en resumen",
    "en breve",
    "por ejemplo",
    "en sintesis",
    "en efecto",
    "en pocas palabras",
    "en una palabra",
    "recapitulando",
    "brevemente",
    "recogiendo lo mas importante",
    "como se ha dicho",
    "para ilustrar",
];

pub const REASONING_PHRASES: [&str; 10] = [
    "por lo tanto",
    "por tanto",
    "en consecuencia",
    "por consiguiente",
    "por ende",
    "por esa razon",
    "por eso",
    "de ahi que",
    "como resultado",
    "como consecuencia",
];

/// Lowercases, strips accents (keeping `ñ`), and collapses whitespace.
pub fn normalize(text: &str) -> String {
    normalize_with_offsets(text).0
}

/// Like [`normalize`], also returning for every output char the byte offset
/// in `text` just past the source char that produced it.
fn normalize_with_offsets(text: &str) -> (String, Vec<usize>) {
    let mut out = String::with_capacity(text.len());
    let mut ends = Vec::with_capacity(text.len());
    let mut pending_space: Option<usize> = None;
    for (pos, c) in text.char_indices() {
        let end = pos + c.len_utf8();
        if c.is_whitespace() {
            if !out.is_empty() {
                pending_space.get_or_insert(end);
            }
            continue;
        }
        if let Some(space_end) = pending_space.take() {
            out.push(' ');
            ends.push(space_end);
        }
        for lower in c.to_lowercase() {
            if lower == 'ñ' {
                out.push('ñ');
                ends.push(end);
                continue;
            }
            for base in std::iter::once(lower).nfd().filter(|d| !is_combining_mark(*d)) {
                out.push(base);
                ends.push(end);
            }
        }
    }
    (out, ends)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhraseMatch {
    pub label: Label,
    /// Canonical (normalized) phrase.
    pub phrase: String,
    /// Bytes of the original sentence covering the phrase, one optional
    /// comma or colon, and the whitespace after it. Always starts at 0.
    pub matched_span: Range<usize>,
}

#[derive(Debug, Clone, Deserialize)]
struct LexiconRecord {
    class: String,
    phrase: String,
}

/// Immutable class → phrase mapping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingLexicon {
    entries: BTreeMap<Label, Vec<String>>,
    // (phrase, label), longest phrase first.
    by_length: Vec<(String, Label)>,
}

impl Default for LinkingLexicon {
    fn default() -> Self {
        LinkingLexicon::new([
            (Label::Contrasting, CONTRASTING_PHRASES.to_vec()),
            (Label::Entailment, ENTAILMENT_PHRASES.to_vec()),
            (Label::Reasoning, REASONING_PHRASES.to_vec()),
        ])
        .expect("built-in lexicon is valid")
    }
}

fn canonical_phrase(raw: &str) -> String {
    normalize(raw.trim().trim_end_matches(',')).trim().to_string()
}

impl LinkingLexicon {
    pub fn new<I, P, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, P)>,
        P: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut map: BTreeMap<Label, Vec<String>> = BTreeMap::new();
        let mut owner: BTreeMap<String, Label> = BTreeMap::new();
        for (label, phrases) in entries {
            for phrase in phrases {
                let phrase = canonical_phrase(phrase.as_ref());
                if phrase.is_empty() {
                    return Err(Error::Config("empty linking phrase".into()));
                }
                if label == Label::Neutral {
                    return Err(Error::Config(format!(
                        "neutral class cannot have linking phrases (`{phrase}`)"
                    )));
                }
                match owner.get(&phrase) {
                    Some(&other) if other != label => {
                        return Err(Error::Config(format!(
                            "phrase `{phrase}` listed under both {other} and {label}"
                        )))
                    }
                    Some(_) => continue,
                    None => {
                        owner.insert(phrase.clone(), label);
                        map.entry(label).or_default().push(phrase);
                    }
                }
            }
        }
        let mut by_length: Vec<(String, Label)> = owner.into_iter().collect();
        by_length.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Ok(LinkingLexicon {
            entries: map,
            by_length,
        })
    }

    /// Loads a lexicon from a JSON-lines file of `{"class", "phrase"}` records.
    /// The file replaces the built-in lists.
    pub fn from_file(path: &Path) -> Result<Self> {
        let records: Vec<LexiconRecord> = io::read_jsonl(path)?;
        let mut grouped: Vec<(Label, Vec<String>)> = Vec::new();
        for r in records {
            let label: Label = r.class.parse().map_err(Error::Config)?;
            match grouped.iter_mut().find(|(l, _)| *l == label) {
                Some((_, v)) => v.push(r.phrase),
                None => grouped.push((label, vec![r.phrase])),
            }
        }
        LinkingLexicon::new(grouped)
    }

    pub fn phrases(&self, label: Label) -> &[String] {
        self.entries.get(&label).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.by_length.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_length.is_empty()
    }

    pub fn label_of(&self, phrase: &str) -> Option<Label> {
        let phrase = canonical_phrase(phrase);
        self.by_length
            .iter()
            .find(|(p, _)| *p == phrase)
            .map(|&(_, l)| l)
    }

    /// Longest phrase that opens `sentence` on a word boundary.
    pub fn match_start(&self, sentence: &str) -> Option<PhraseMatch> {
        let (norm, ends) = normalize_with_offsets(sentence);
        let (phrase, label) = self.by_length.iter().find(|(p, _)| {
            norm.starts_with(p.as_str())
                && norm[p.len()..]
                    .chars()
                    .next()
                    .is_none_or(|c| !c.is_alphanumeric())
        })?;
        let n_chars = phrase.chars().count();
        let mut end = ends[n_chars - 1];
        let rest = &sentence[end..];
        let after_ws = rest.trim_start();
        if let Some(c) = after_ws.chars().next().filter(|c| matches!(c, ',' | ':')) {
            end += rest.len() - after_ws.len() + c.len_utf8();
        }
        let rest = &sentence[end..];
        end += rest.len() - rest.trim_start().len();
        Some(PhraseMatch {
            label: *label,
            phrase: phrase.clone(),
            matched_span: 0..end,
        })
    }
}

pub fn match_sentence_start(sentence: &str, lexicon: &LinkingLexicon) -> Option<PhraseMatch> {
    lexicon.match_start(sentence)
}

/// Removes the matched linking phrase and capitalizes what remains.
pub fn strip_match(sentence: &str, m: &PhraseMatch) -> Result<String> {
    let rest = sentence
        .get(m.matched_span.end..)
        .unwrap_or_default()
        .trim();
    if !rest.chars().any(char::is_alphanumeric) {
        return Err(Error::DegenerateHypothesis);
    }
    let mut chars = rest.chars();
    let first = chars.next().expect("non-empty");
    Ok(first.to_uppercase().chain(chars).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_lexicon_has_table_sizes() {
        let lex = LinkingLexicon::default();
        assert_eq!(lex.phrases(Label::Contrasting).len(), 8);
        assert_eq!(lex.phrases(Label::Entailment).len(), 31);
        assert_eq!(lex.phrases(Label::Reasoning).len(), 10);
        assert!(lex.phrases(Label::Neutral).is_empty());
        assert_eq!(lex.len(), 49);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize("Sin Embargo"), "sin embargo");
        assert_eq!(normalize("específicamente"), "especificamente");
        assert_eq!(normalize("  Por   lo tanto "), "por lo tanto");
        assert_eq!(normalize("Año PINGÜINO"), "año pinguino");
    }

    #[test]
    fn matches_sentence_initial_phrases() {
        let lex = LinkingLexicon::default();
        let m = lex
            .match_start("Sin embargo, Siglo 21 sobrevivió a ese intento")
            .unwrap();
        assert_eq!(m.label, Label::Contrasting);
        assert_eq!(m.phrase, "sin embargo");
        assert_eq!(m.matched_span, 0.."Sin embargo, ".len());

        let m = lex.match_start("Por lo tanto, se rechaza la hipótesis.").unwrap();
        assert_eq!((m.label, m.phrase.as_str()), (Label::Reasoning, "por lo tanto"));

        assert!(lex.match_start("El gato duerme.").is_none());
        // whole-word boundary
        assert!(lex.match_start("Precisamenteloquedije.").is_none());
    }

    #[test]
    fn longest_phrase_wins() {
        let lex = LinkingLexicon::default();
        // "por tanto" vs "por lo tanto" do not overlap, but "en resumen" is a
        // prefix of nothing while "por eso" and "por esa razon" share "por es".
        let m = lex.match_start("Por esa razón, todo cambió.").unwrap();
        assert_eq!(m.phrase, "por esa razon");
        let custom = LinkingLexicon::new([
            (Label::Contrasting, vec!["por otra parte"]),
            (Label::Entailment, vec!["por otra"]),
        ])
        .unwrap();
        assert_eq!(
            custom.match_start("Por otra parte, no.").unwrap().label,
            Label::Contrasting
        );
        assert_eq!(
            custom.match_start("Por otra vía, sí.").unwrap().label,
            Label::Entailment
        );
    }

    #[test]
    fn accented_text_matches_unaccented_phrases() {
        let lex = LinkingLexicon::default();
        let m = lex.match_start("Específicamente, el río creció.").unwrap();
        assert_eq!(m.label, Label::Entailment);
        assert_eq!(strip_match("Específicamente, el río creció.", &m).unwrap(), "El río creció.");
        let m = lex.match_start("De ahí que  llueva.").unwrap();
        assert_eq!(m.phrase, "de ahi que");
        assert_eq!(strip_match("De ahí que  llueva.", &m).unwrap(), "Llueva.");
    }

    #[test]
    fn strip_examples() {
        let lex = LinkingLexicon::default();
        let s = "Sin embargo, Siglo 21 sobrevivió a ese intento";
        let m = lex.match_start(s).unwrap();
        assert_eq!(strip_match(s, &m).unwrap(), "Siglo 21 sobrevivió a ese intento");

        let m = lex.match_start("Por ejemplo:").unwrap();
        assert!(matches!(
            strip_match("Por ejemplo:", &m),
            Err(Error::DegenerateHypothesis)
        ));

        let s = "en consecuencia el río creció";
        let m = lex.match_start(s).unwrap();
        assert_eq!(strip_match(s, &m).unwrap(), "El río creció");
    }

    #[test]
    fn rejects_conflicting_and_neutral_phrases() {
        assert!(LinkingLexicon::new([
            (Label::Contrasting, vec!["sin embargo"]),
            (Label::Reasoning, vec!["Sin Embargo,"]),
        ])
        .is_err());
        assert!(LinkingLexicon::new([(Label::Neutral, vec!["y"])]).is_err());
    }

    #[test]
    fn phrases_are_stored_canonically() {
        let lex = LinkingLexicon::new([(Label::Reasoning, vec!["  Por  Ende, "])]).unwrap();
        assert_eq!(lex.phrases(Label::Reasoning), ["por ende"]);
    }

    fn all_phrases() -> Vec<(String, Label)> {
        let lex = LinkingLexicon::default();
        Label::LINKED
            .into_iter()
            .flat_map(|l| lex.phrases(l).iter().map(move |p| (p.clone(), l)).collect::<Vec<_>>())
            .collect()
    }

    proptest! {
        #[test]
        fn every_phrase_matches_its_class(idx in 0usize..49, suffix in "[a-zñ][a-z ñ]{0,30}") {
            let lex = LinkingLexicon::default();
            let (phrase, label) = all_phrases()[idx].clone();
            let sentence = format!("{phrase}, {suffix}");
            let m = lex.match_start(&sentence).unwrap();
            prop_assert_eq!(m.label, label);
            prop_assert_eq!(m.matched_span.start, 0);
            if let Ok(stripped) = strip_match(&sentence, &m) {
                let again = lex.match_start(&stripped);
                prop_assert!(again.is_none_or(|a| a.phrase != phrase || normalize(&suffix).starts_with(&phrase)));
            }
        }

        #[test]
        fn normalize_is_idempotent(s in "\\PC{0,40}") {
            let once = normalize(&s);
            prop_assert_eq!(normalize(&once), once);
        }
    }
}
