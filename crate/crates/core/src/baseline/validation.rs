//! Filtering pairs by majority vote of human annotations.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::extract::LabeledPair;
use crate::label::{Genre, Label};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub pair_id: String,
    pub annotator_id: String,
    pub label: Label,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub total: usize,
    pub retained: usize,
    pub dropped_unannotated: usize,
    /// No label reached a strict majority of the votes.
    pub dropped_no_majority: usize,
    /// The majority label differs from the pair's label.
    pub dropped_disagreement: usize,
    pub retained_per_class: BTreeMap<Label, usize>,
    pub retained_per_genre: BTreeMap<Genre, usize>,
    pub warnings: Vec<String>,
}

/// Label holding more than half of `votes`, if any.
pub fn strict_majority(votes: &[Label]) -> Option<Label> {
    let mut counts = [0usize; 4];
    for v in votes {
        counts[v.index()] += 1;
    }
    Label::ALL
        .into_iter()
        .find(|l| 2 * counts[l.index()] > votes.len())
}

/// Keeps the pairs whose label equals the strict majority of their
/// annotations. Unannotated pairs are dropped.
pub fn majority_filter(
    pairs: &[LabeledPair],
    annotations: &[AnnotationRecord],
) -> (Vec<LabeledPair>, ValidationReport) {
    let known: HashSet<&str> = pairs.iter().map(|p| p.pair_id.as_str()).collect();
    let mut votes: HashMap<&str, Vec<Label>> = HashMap::new();
    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    let mut report = ValidationReport {
        total: pairs.len(),
        ..ValidationReport::default()
    };
    for a in annotations {
        if !known.contains(a.pair_id.as_str()) {
            report
                .warnings
                .push(format!("annotation for unknown pair `{}` ignored", a.pair_id));
            continue;
        }
        if !seen.insert((&a.pair_id, &a.annotator_id)) {
            report.warnings.push(format!(
                "annotator `{}` labeled pair `{}` more than once; later labels ignored",
                a.annotator_id, a.pair_id
            ));
            continue;
        }
        votes.entry(&a.pair_id).or_default().push(a.label);
    }

    let mut kept = Vec::new();
    for p in pairs {
        let Some(v) = votes.get(p.pair_id.as_str()) else {
            report.dropped_unannotated += 1;
            continue;
        };
        match strict_majority(v) {
            None => report.dropped_no_majority += 1,
            Some(l) if l != p.label => report.dropped_disagreement += 1,
            Some(_) => {
                *report.retained_per_class.entry(p.label).or_default() += 1;
                *report.retained_per_genre.entry(p.genre).or_default() += 1;
                kept.push(p.clone());
            }
        }
    }
    report.retained = kept.len();
    (kept, report)
}
