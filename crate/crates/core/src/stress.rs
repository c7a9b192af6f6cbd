//! Label-preserving perturbations of a test split.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extract::LabeledPair;
use crate::seed;

/// Tautology appended to the premise, five times over.
pub const LENGTH_FILLER: &str = "y verdadero es verdadero y verdadero es verdadero y verdadero es verdadero y verdadero es verdadero y verdadero es verdadero";
pub const NEGATION_SUFFIX: &str = "y falso no es verdadero";
pub const OVERLAP_SUFFIX: &str = "y verdadero es verdadero";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StressKind {
    LengthMismatch,
    Negation,
    Overlap,
    Spelling,
}

impl StressKind {
    pub const ALL: [StressKind; 4] = [
        StressKind::LengthMismatch,
        StressKind::Negation,
        StressKind::Overlap,
        StressKind::Spelling,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StressKind::LengthMismatch => "length_mismatch",
            StressKind::Negation => "negation",
            StressKind::Overlap => "overlap",
            StressKind::Spelling => "spelling",
        }
    }

    /// Output file stem, e.g. `test_negation`.
    pub fn file_stem(self) -> String {
        format!("test_{}", self.as_str())
    }
}

impl fmt::Display for StressKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StressKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StressKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown stress kind `{s}`"))
    }
}

/// A stressed pair. `unmodified` is set when a spelling error could not be
/// introduced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StressedPair {
    #[serde(flatten)]
    pub pair: LabeledPair,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unmodified: bool,
}

/// Interior adjacent positions `(j, j + 1)` of a word whose characters differ.
fn swappable_positions(word: &[char]) -> Vec<usize> {
    if word.len() < 4 {
        return Vec::new();
    }
    (1..word.len() - 2)
        .filter(|&j| word[j] != word[j + 1])
        .collect()
}

/// Transposes two adjacent interior letters of one word of length >= 4.
/// Returns `None` if no word qualifies.
pub fn misspell(text: &str, rng: &mut impl Rng) -> Option<String> {
    let chars: Vec<char> = text.chars().collect();
    // (start, end) char ranges of alphabetic runs with a usable swap
    let mut words = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_alphabetic() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && chars[i].is_alphabetic() {
            i += 1;
        }
        if !swappable_positions(&chars[start..i]).is_empty() {
            words.push((start, i));
        }
    }
    if words.is_empty() {
        return None;
    }
    let (start, end) = words[rng.gen_range(0..words.len())];
    let positions = swappable_positions(&chars[start..end]);
    let j = start + positions[rng.gen_range(0..positions.len())];
    let mut out = chars;
    out.swap(j, j + 1);
    Some(out.into_iter().collect())
}

pub fn apply_stress(pair: &LabeledPair, kind: StressKind, seed: u64) -> StressedPair {
    let mut out = pair.clone();
    let mut unmodified = false;
    match kind {
        StressKind::LengthMismatch => {
            out.premise = format!("{} {LENGTH_FILLER}", pair.premise);
        }
        StressKind::Negation => {
            out.hypothesis = format!("{} {NEGATION_SUFFIX}", pair.hypothesis);
        }
        StressKind::Overlap => {
            out.hypothesis = format!("{} {OVERLAP_SUFFIX}", pair.hypothesis);
        }
        StressKind::Spelling => {
            let mut rng = seed::rng_for(seed, &["spelling", &pair.pair_id]);
            match misspell(&pair.premise, &mut rng) {
                Some(p) => out.premise = p,
                None => unmodified = true,
            }
        }
    }
    StressedPair {
        pair: out,
        unmodified,
    }
}

/// One parallel stressed copy of `test` per kind, in [`StressKind::ALL`] order.
pub fn generate_stress_suite(test: &[LabeledPair], seed: u64) -> Vec<(StressKind, Vec<StressedPair>)> {
    StressKind::ALL
        .into_iter()
        .map(|kind| {
            let pairs = test
                .par_iter()
                .map(|p| apply_stress(p, kind, seed))
                .collect();
            (kind, pairs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Loc;
    use crate::extract::pair_id;
    use crate::label::{Genre, Label};
    use rand::SeedableRng;

    fn pair(premise: &str, hypothesis: &str) -> LabeledPair {
        LabeledPair {
            pair_id: pair_id("c", "d", Loc::new(0, 0), Loc::new(0, 1), Label::Reasoning),
            premise: premise.into(),
            hypothesis: hypothesis.into(),
            label: Label::Reasoning,
            corpus_id: "c".into(),
            genre: Genre::Legal,
            doc_id: "d".into(),
            premise_paragraph: 0,
            premise_sentence: 0,
            hypothesis_paragraph: 0,
            hypothesis_sentence: 1,
            matched_phrase: Some("por tanto".into()),
            neutral_strategy: None,
        }
    }

    #[test]
    fn filler_lengths() {
        assert_eq!(LENGTH_FILLER.chars().count() + 1, 125);
        assert_eq!(LENGTH_FILLER, [OVERLAP_SUFFIX; 5].join(" "));
        // " y verdadero es verdadero" is 25 characters.
        assert_eq!(OVERLAP_SUFFIX.len() + 1, 25);
    }

    #[test]
    fn appended_expressions() {
        let p = pair("El gato va.", "H");
        let s = apply_stress(&p, StressKind::Negation, 0);
        assert_eq!(s.pair.hypothesis, "H y falso no es verdadero");
        assert_eq!(s.pair.premise, p.premise);
        assert_eq!(s.pair.label, p.label);

        let s = apply_stress(&p, StressKind::Overlap, 0);
        assert_eq!(s.pair.hypothesis.len(), p.hypothesis.len() + 25);

        let s = apply_stress(&p, StressKind::LengthMismatch, 0);
        assert!(s.pair.premise.ends_with(&format!(" {LENGTH_FILLER}")));
        assert_eq!(s.pair.hypothesis, "H");
    }

    #[test]
    fn four_letter_word_gets_its_only_interior_swap() {
        let s = apply_stress(&pair("gato va", "H"), StressKind::Spelling, 3);
        assert_eq!(s.pair.premise, "gtao va");
        assert!(!s.unmodified);
    }

    #[test]
    fn short_words_leave_premise_unmodified() {
        let s = apply_stress(&pair("el sol y yo", "H"), StressKind::Spelling, 3);
        assert_eq!(s.pair.premise, "el sol y yo");
        assert!(s.unmodified);
        // "arra" has equal interior letters, so no visible swap exists
        let s = apply_stress(&pair("arra", "H"), StressKind::Spelling, 3);
        assert!(s.unmodified);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["unmodified"], true);
        let v = serde_json::to_value(apply_stress(&pair("x", "H"), StressKind::Negation, 0)).unwrap();
        assert!(v.get("unmodified").is_none());
    }

    #[test]
    fn misspell_touches_only_interior_letters() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let out = misspell("Murciélago, árbol y pingüino.", &mut rng).unwrap();
            let (a, b): (Vec<char>, Vec<char>) = (
                "Murciélago, árbol y pingüino.".chars().collect(),
                out.chars().collect(),
            );
            let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
            assert_eq!(diff.len(), 2);
            assert_eq!(diff[1], diff[0] + 1);
            assert_eq!((a[diff[0]], a[diff[1]]), (b[diff[1]], b[diff[0]]));
            assert!(a[diff[0] - 1].is_alphabetic() && a[diff[1] + 1].is_alphabetic());
        }
    }

    #[test]
    fn suite_is_parallel_to_input() {
        let test: Vec<_> = ["Uno dos tres cuatro", "perro gato", "sí"]
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut x = pair(p, "H");
                x.pair_id = format!("id{i}");
                x
            })
            .collect();
        let suite = generate_stress_suite(&test, 9);
        assert_eq!(suite.len(), 4);
        for (_, pairs) in &suite {
            let ids: Vec<_> = pairs.iter().map(|s| s.pair.pair_id.as_str()).collect();
            assert_eq!(ids, ["id0", "id1", "id2"]);
        }
        assert_eq!(generate_stress_suite(&test, 9), suite);
    }
}
