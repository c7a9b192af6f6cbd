//! Rule-based Spanish sentence segmentation.
//!
//! A boundary is placed after a run of `.`, `?`, `!` or `…` (plus any closing
//! quotes or brackets) when it is followed by whitespace and then an
//! uppercase letter, a digit, or an opening `¿`/`¡`/quote/bracket leading into
//! one. A period closing a known abbreviation or a single-letter initial is
//! never a boundary. Periods between digits (`3.14`) are never followed by
//! whitespace, so they never split.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::corpus::Sentence;

/// Lowercase abbreviations, each with its final period.
pub const ABBREVIATIONS: &[&str] = &[
    "sr.", "sra.", "srta.", "sres.", "srs.", "dr.", "dra.", "drs.", "dras.", "d.", "dña.", "lic.",
    "ing.", "arq.", "prof.", "profa.", "mons.", "gral.", "cnel.", "tte.", "sto.", "sta.", "núm.",
    "num.", "nº.", "pág.", "pag.", "págs.", "art.", "arts.", "cap.", "caps.", "vol.", "vols.",
    "ed.", "eds.", "inc.", "cía.", "ltda.", "s.a.", "av.", "avda.", "ee.", "fig.", "figs.", "tel.",
    "aprox.", "ej.", "p.", "pp.", "vs.", "dpto.", "depto.", "col.", "cf.", "cfr.", "op.", "cit.",
    "admón.", "a.c.", "d.c.", "a.m.", "p.m.", "ud.", "uds.", "vd.", "vds.", "mr.", "mrs.", "st.",
    "jr.", "no.",
];

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| ABBREVIATIONS.iter().copied().collect())
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '?' | '!' | '…')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | '»' | '”' | '’' | ')' | ']')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '«' | '“' | '‘' | '(' | '[' | '—' | '-')
}

/// Does the text starting at `rest` look like the beginning of a sentence?
fn starts_sentence(rest: &str) -> bool {
    let mut chars = rest.chars();
    let Some(mut c) = chars.next() else {
        return false;
    };
    if matches!(c, '¿' | '¡') {
        return true;
    }
    if is_opening(c) {
        match chars.next() {
            Some(next) => c = next,
            None => return false,
        }
        if matches!(c, '¿' | '¡') {
            return true;
        }
    }
    c.is_uppercase() || c.is_ascii_digit()
}

/// True when the word ending just before the period at `dot` is an
/// abbreviation or an initial.
fn is_abbreviation(text: &str, dot: usize) -> bool {
    let start = text[..dot]
        .rfind(char::is_whitespace)
        .map(|i| i + text[i..].chars().next().map_or(1, char::len_utf8))
        .unwrap_or(0);
    let word = text[start..dot].trim_start_matches(is_opening);
    if word.is_empty() {
        return false;
    }
    let mut chars = word.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if c.is_alphabetic() {
            return true;
        }
    }
    let key = format!("{}.", word.to_lowercase());
    abbreviations().contains(key.as_str())
}

/// Byte spans of the sentences of `text`. Spans are trimmed and cover all
/// non-whitespace content in order.
pub fn sentence_spans(text: &str) -> Vec<(usize, usize)> {
    let mut cuts = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !is_terminal(c) {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < chars.len() && is_terminal(chars[i].1) {
            i += 1;
        }
        let single_period = c == '.' && i - run_start == 1;
        while i < chars.len() && is_closing(chars[i].1) {
            i += 1;
        }
        let end = chars.get(i).map_or(text.len(), |&(p, _)| p);
        if i >= chars.len() || !chars[i].1.is_whitespace() {
            continue;
        }
        if single_period && is_abbreviation(text, pos) {
            continue;
        }
        let rest = text[end..].trim_start();
        if starts_sentence(rest) {
            cuts.push(end);
        }
    }

    let mut spans = Vec::new();
    let mut start = 0;
    for cut in cuts.into_iter().chain(std::iter::once(text.len())) {
        if let Some(span) = trimmed(text, start, cut) {
            spans.push(span);
        }
        start = cut;
    }
    merge_punctuation_only(text, spans)
}

fn trimmed(text: &str, start: usize, end: usize) -> Option<(usize, usize)> {
    let slice = &text[start..end];
    let lead = slice.len() - slice.trim_start().len();
    let body = slice.trim();
    (!body.is_empty()).then(|| (start + lead, start + lead + body.len()))
}

fn merge_punctuation_only(text: &str, spans: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let has_word = |(s, e): (usize, usize)| text[s..e].chars().any(char::is_alphanumeric);
    let mut out: Vec<(usize, usize)> = Vec::with_capacity(spans.len());
    let mut pending_start: Option<usize> = None;
    for span in spans {
        if has_word(span) {
            let start = pending_start.take().unwrap_or(span.0);
            out.push((start, span.1));
        } else if let Some(last) = out.last_mut() {
            last.1 = span.1;
        } else {
            pending_start.get_or_insert(span.0);
        }
    }
    if let Some(start) = pending_start {
        // Nothing but punctuation in the whole paragraph.
        out.push((start, text.trim_end().len()));
    }
    out
}

/// Splits one paragraph into located sentences.
pub fn segment_sentences(paragraph: &str, doc_id: &str, paragraph_index: usize) -> Vec<Sentence> {
    sentence_spans(paragraph)
        .into_iter()
        .enumerate()
        .map(|(sentence_index, (s, e))| Sentence {
            text: paragraph[s..e].to_string(),
            doc_id: doc_id.to_string(),
            paragraph_index,
            sentence_index,
        })
        .collect()
}

/// Segments every paragraph of a document.
pub fn segment_document(doc: &crate::corpus::Document) -> Vec<Vec<Sentence>> {
    doc.paragraphs
        .iter()
        .enumerate()
        .map(|(p, text)| segment_sentences(text, &doc.doc_id, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(p: &str) -> Vec<String> {
        segment_sentences(p, "d", 0).into_iter().map(|s| s.text).collect()
    }

    #[test]
    fn two_clear_boundaries() {
        assert_eq!(texts("Hola. Adiós."), ["Hola.", "Adiós."]);
    }

    #[test]
    fn abbreviation_suppresses_boundary() {
        assert_eq!(
            texts("El Dr. Ruiz llegó. Saludó."),
            ["El Dr. Ruiz llegó.", "Saludó."]
        );
        assert_eq!(
            texts("Viajó a EE. UU. en 2001. Volvió."),
            ["Viajó a EE. UU. en 2001.", "Volvió."]
        );
    }

    #[test]
    fn decimals_and_lowercase_continuations_do_not_split() {
        assert_eq!(texts("Mide 3.14 metros. Bien."), ["Mide 3.14 metros.", "Bien."]);
        assert_eq!(texts("Dijo adiós. y se fue."), ["Dijo adiós. y se fue."]);
    }

    #[test]
    fn questions_exclamations_and_quotes() {
        assert_eq!(
            texts("¿Vienes? ¡Claro! «Vamos.» Luego."),
            ["¿Vienes?", "¡Claro!", "«Vamos.»", "Luego."]
        );
        assert_eq!(texts("Espera... Ya está."), ["Espera...", "Ya está."]);
    }

    #[test]
    fn initials_are_not_boundaries() {
        assert_eq!(
            texts("Lo escribió J. García en 1990. Fin."),
            ["Lo escribió J. García en 1990.", "Fin."]
        );
    }

    #[test]
    fn punctuation_only_fragments_merge_into_previous() {
        assert_eq!(texts("Hola. ... Adiós."), ["Hola. ...", "Adiós."]);
        assert_eq!(texts("..."), ["..."]);
    }

    #[test]
    fn unterminated_paragraph_is_one_sentence() {
        assert_eq!(texts("sin punto final"), ["sin punto final"]);
    }

    #[test]
    fn indices_are_assigned_in_order() {
        let s = segment_sentences("Uno. Dos. Tres.", "doc", 4);
        assert_eq!(s.len(), 3);
        assert!(s.iter().enumerate().all(|(i, x)| x.sentence_index == i && x.paragraph_index == 4));
    }

    fn collapse(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    proptest! {
        #[test]
        fn segmentation_partitions_the_paragraph(p in "[A-Za-zÁÉáéñ0-9 .,;?!¿¡«»\"()\n]{1,200}") {
            prop_assume!(!p.trim().is_empty());
            let sentences = texts(&p);
            let joined = sentences.join(" ");
            prop_assert_eq!(collapse(&joined), collapse(&p));
            for s in &sentences {
                prop_assert!(!s.is_empty());
                prop_assert_eq!(s.trim(), s.as_str());
            }
            if sentences.len() > 1 {
                for s in &sentences {
                    prop_assert!(s.chars().any(char::is_alphanumeric));
                }
            }
            prop_assert_eq!(sentences, texts(&p));
        }
    }
}
