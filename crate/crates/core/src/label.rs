use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Relation class of a premise/hypothesis pair.
///
/// The declaration order is the fixed class order used by the classifier
/// and by every confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Contrasting,
    Entailment,
    Neutral,
    Reasoning,
}

impl Label {
    pub const ALL: [Label; 4] = [
        Label::Contrasting,
        Label::Entailment,
        Label::Neutral,
        Label::Reasoning,
    ];

    /// Classes that are signalled by a linking phrase.
    pub const LINKED: [Label; 3] = [Label::Contrasting, Label::Entailment, Label::Reasoning];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Label> {
        Label::ALL.get(index).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Contrasting => "contrasting",
            Label::Entailment => "entailment",
            Label::Neutral => "neutral",
            Label::Reasoning => "reasoning",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == s.trim().to_lowercase())
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

/// Writing genre of a corpus. The set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Genre {
    Articles,
    Books,
    Comments,
    Legal,
    Clinical,
    News,
    Talks,
    Theses,
}

impl Genre {
    pub const ALL: [Genre; 8] = [
        Genre::Articles,
        Genre::Books,
        Genre::Comments,
        Genre::Legal,
        Genre::Clinical,
        Genre::News,
        Genre::Talks,
        Genre::Theses,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Genre::Articles => "articles",
            Genre::Books => "books",
            Genre::Comments => "comments",
            Genre::Legal => "legal",
            Genre::Clinical => "clinical",
            Genre::News => "news",
            Genre::Talks => "talks",
            Genre::Theses => "theses",
        }
    }
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Genre {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Genre::ALL
            .into_iter()
            .find(|g| g.as_str() == s.trim().to_lowercase())
            .ok_or_else(|| format!("unknown genre `{s}`"))
    }
}
