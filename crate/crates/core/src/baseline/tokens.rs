//! Per-class token frequency ranking.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::features::bow_tokens;
use crate::extract::LabeledPair;
use crate::label::Label;

/// Common Spanish function words. "si" is deliberately absent: it is a
/// content cue for the contrasting class.
pub const SPANISH_STOPWORDS: &[&str] = &[
    "a", "al", "algo", "algunas", "algunos", "ante", "antes", "como", "con", "contra", "cual",
    "cuando", "de", "del", "desde", "donde", "durante", "e", "el", "ella", "ellas", "ellos", "en",
    "entre", "era", "es", "esa", "esas", "ese", "eso", "esos", "esta", "estas", "este", "esto",
    "estos", "fue", "fueron", "ha", "han", "hasta", "hay", "la", "las", "le", "les", "lo", "los",
    "me", "mi", "mis", "muy", "más", "mas", "ni", "no", "nos", "o", "otra", "otro", "para", "pero",
    "por", "porque", "que", "se", "sea", "ser", "sin", "sobre", "son", "su", "sus", "también",
    "te", "tu", "un", "una", "uno", "unos", "unas", "y", "ya", "yo", "él",
];

pub fn default_stopwords() -> HashSet<String> {
    SPANISH_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

/// Top `top_k` tokens per class over premises and hypotheses, by count then
/// lexicographically. Every class appears in the result.
pub fn class_token_report(
    pairs: &[LabeledPair],
    top_k: usize,
    stopwords: &HashSet<String>,
) -> BTreeMap<Label, Vec<(String, usize)>> {
    let mut counts: BTreeMap<Label, HashMap<String, usize>> =
        Label::ALL.iter().map(|l| (*l, HashMap::new())).collect();
    for p in pairs {
        let c = counts.get_mut(&p.label).expect("all labels present");
        for t in bow_tokens(&p.premise).chain(bow_tokens(&p.hypothesis)) {
            if !stopwords.contains(&t) {
                *c.entry(t).or_default() += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|(label, c)| {
            let mut ranked: Vec<(String, usize)> = c.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            ranked.truncate(top_k);
            (label, ranked)
        })
        .collect()
}
