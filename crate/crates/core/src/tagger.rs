//! Part-of-speech tagging used by the sentence completeness filter.
//!
//! The filter only asks whether a sentence has a subject-like token and a
//! predicate-like token, so the built-in tagger is a small rule table that
//! errs on the side of finding nouns and verbs.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::corpus::Loc;
use crate::error::{Error, Result};
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Pron,
    Propn,
    Aux,
    Verb,
    Adj,
    Adv,
    Det,
    Adp,
    Num,
    Punct,
    Other,
}

impl PosTag {
    pub fn is_subject(self) -> bool {
        matches!(self, PosTag::Noun | PosTag::Pron | PosTag::Propn)
    }

    pub fn is_predicate(self) -> bool {
        matches!(self, PosTag::Aux | PosTag::Verb)
    }
}

impl std::str::FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim().to_uppercase().as_str() {
            "NOUN" => PosTag::Noun,
            "PRON" => PosTag::Pron,
            "PROPN" => PosTag::Propn,
            "AUX" => PosTag::Aux,
            "VERB" => PosTag::Verb,
            "ADJ" => PosTag::Adj,
            "ADV" => PosTag::Adv,
            "DET" => PosTag::Det,
            "ADP" => PosTag::Adp,
            "NUM" => PosTag::Num,
            "PUNCT" => PosTag::Punct,
            _ => PosTag::Other,
        })
    }
}

/// Where a sentence sits, for taggers backed by pre-computed annotations.
#[derive(Debug, Clone, Copy)]
pub struct SentenceKey<'a> {
    pub doc_id: &'a str,
    pub loc: Loc,
}

pub trait Tagger: Send + Sync {
    fn tag(&self, key: Option<SentenceKey<'_>>, sentence: &str) -> Vec<(String, PosTag)>;
}

/// True iff the tags contain a subject-like and a predicate-like token.
pub fn has_subject_and_predicate(tags: &[(String, PosTag)]) -> bool {
    tags.iter().any(|(_, t)| t.is_subject()) && tags.iter().any(|(_, t)| t.is_predicate())
}

pub fn is_complete(sentence: &str, tagger: &dyn Tagger) -> bool {
    has_subject_and_predicate(&tagger.tag(None, sentence))
}

const DETERMINERS: &[&str] = &[
    "el", "la", "los", "las", "lo", "un", "una", "unos", "unas", "este", "esta", "estos", "estas",
    "ese", "esa", "esos", "esas", "aquel", "aquella", "aquellos", "aquellas", "mi", "mis", "tu",
    "tus", "su", "sus", "nuestro", "nuestra", "nuestros", "nuestras", "vuestro", "vuestra",
    "cada", "todo", "toda", "todos", "todas", "otro", "otra", "otros", "otras", "algún", "alguna",
    "algunos", "algunas", "ningún", "ninguna", "varios", "varias", "mucho", "mucha", "muchos",
    "muchas", "poco", "poca", "pocos", "pocas", "tal", "tales", "cuyo", "cuya", "al", "del",
];

const PRONOUNS: &[&str] = &[
    "yo", "tú", "él", "ella", "ello", "nosotros", "nosotras", "vosotros", "vosotras", "ellos",
    "ellas", "usted", "ustedes", "me", "te", "se", "nos", "os", "le", "les", "mí", "ti", "sí",
    "conmigo", "contigo", "consigo", "esto", "eso", "aquello", "éste", "ésta", "ése", "ésa",
    "quien", "quienes", "alguien", "nadie", "algo", "nada", "ambos", "ambas",
];

const AUXILIARIES: &[&str] = &[
    // ser
    "ser", "soy", "eres", "es", "somos", "sois", "son", "era", "eras", "éramos", "eran", "fui",
    "fuiste", "fue", "fuimos", "fueron", "sea", "seas", "seamos", "sean", "fuera", "fueran",
    "fuese", "sería", "serían", "será", "serán", "sido", "siendo",
    // estar
    "estar", "estoy", "estás", "está", "estamos", "están", "estaba", "estaban", "estuvo",
    "estuvieron", "esté", "estén", "estaría", "estará", "estado", "estando",
    // haber
    "haber", "he", "has", "ha", "hay", "hemos", "han", "había", "habían", "hubo", "hubieron",
    "haya", "hayan", "hubiera", "hubieran", "habría", "habrá", "habrán", "habiendo",
];

const ADPOSITIONS: &[&str] = &[
    "a", "ante", "bajo", "cabe", "con", "contra", "de", "desde", "durante", "en", "entre", "hacia",
    "hasta", "mediante", "para", "por", "según", "sin", "so", "sobre", "tras", "versus", "vía",
];

const OTHER_FUNCTION_WORDS: &[&str] = &[
    "y", "e", "o", "u", "ni", "pero", "sino", "que", "porque", "pues", "aunque", "si", "como",
    "cuando", "donde", "mientras", "qué", "cómo", "cuándo", "dónde", "cuál", "cuáles",
];

const ADVERBS: &[&str] = &[
    "no", "muy", "más", "menos", "ya", "también", "tampoco", "nunca", "siempre", "aquí", "allí",
    "ahí", "hoy", "ayer", "mañana", "luego", "después", "antes", "bien", "mal", "así", "aún",
    "todavía", "casi", "solo", "sólo", "tan", "tanto", "quizás", "quizá", "entonces",
];

/// Verb endings tried longest first; the stem before them must have at least
/// two letters.
const VERB_SUFFIXES: &[&str] = &[
    "ieron", "iendo", "aron", "ando", "aban", "aba", "ían", "ado", "ido", "ar", "er", "ir", "ía",
    "ó", "é", "an", "en", "a", "e",
];

struct ClosedClasses {
    words: HashMap<&'static str, PosTag>,
}

fn closed_classes() -> &'static ClosedClasses {
    static CC: OnceLock<ClosedClasses> = OnceLock::new();
    CC.get_or_init(|| {
        let mut words = HashMap::new();
        // Later tables win on overlap: "esto" is a pronoun, "como" a conjunction.
        for (list, tag) in [
            (ADPOSITIONS, PosTag::Adp),
            (DETERMINERS, PosTag::Det),
            (OTHER_FUNCTION_WORDS, PosTag::Other),
            (ADVERBS, PosTag::Adv),
            (PRONOUNS, PosTag::Pron),
            (AUXILIARIES, PosTag::Aux),
        ] {
            for w in list {
                words.insert(*w, tag);
            }
        }
        ClosedClasses { words }
    })
}

/// Splits a sentence into word tokens (letters, digits, inner `-`, `'`, `.`
/// between digits) and single punctuation characters.
pub fn tokenize(sentence: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    for (i, &(pos, c)) in chars.iter().enumerate() {
        let joins = |c: char| {
            let prev = i.checked_sub(1).map(|j| chars[j].1);
            let next = chars.get(i + 1).map(|x| x.1);
            match c {
                '-' | '\'' => {
                    prev.is_some_and(char::is_alphanumeric) && next.is_some_and(char::is_alphanumeric)
                }
                '.' | ',' => {
                    prev.is_some_and(|p| p.is_ascii_digit()) && next.is_some_and(|n| n.is_ascii_digit())
                }
                _ => false,
            }
        };
        if c.is_alphanumeric() || (start.is_some() && joins(c)) {
            start.get_or_insert(pos);
            continue;
        }
        if let Some(s) = start.take() {
            tokens.push(&sentence[s..pos]);
        }
        if !c.is_whitespace() {
            tokens.push(&sentence[pos..pos + c.len_utf8()]);
        }
    }
    if let Some(s) = start {
        tokens.push(&sentence[s..]);
    }
    tokens
}

/// Rule-based Spanish tagger.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinTagger;

impl BuiltinTagger {
    pub fn tag_sentence(&self, sentence: &str) -> Vec<(String, PosTag)> {
        let mut out: Vec<(String, PosTag)> = Vec::new();
        let mut at_start = true;
        for token in tokenize(sentence) {
            let tag = tag_token(token, at_start, out.last().map(|(_, t)| *t));
            if tag != PosTag::Punct {
                at_start = false;
            }
            out.push((token.to_string(), tag));
        }
        out
    }
}

fn has_verb_suffix(lower: &str) -> bool {
    VERB_SUFFIXES.iter().any(|suffix| {
        lower
            .strip_suffix(suffix)
            .is_some_and(|stem| stem.chars().filter(|c| c.is_alphabetic()).count() >= 2)
    })
}

fn tag_token(token: &str, sentence_initial: bool, previous: Option<PosTag>) -> PosTag {
    let first = token.chars().next().expect("tokens are non-empty");
    if !token.chars().any(char::is_alphanumeric) {
        return PosTag::Punct;
    }
    if first.is_ascii_digit() {
        return PosTag::Num;
    }
    let lower = token.to_lowercase();
    if let Some(&tag) = closed_classes().words.get(lower.as_str()) {
        return tag;
    }
    if lower.chars().count() > 6 && lower.ends_with("mente") {
        return PosTag::Adv;
    }
    if first.is_uppercase() {
        return if sentence_initial { PosTag::Noun } else { PosTag::Propn };
    }
    if matches!(previous, Some(PosTag::Det | PosTag::Adp)) {
        return PosTag::Noun;
    }
    if has_verb_suffix(&lower) {
        return PosTag::Verb;
    }
    PosTag::Noun
}

impl Tagger for BuiltinTagger {
    fn tag(&self, _key: Option<SentenceKey<'_>>, sentence: &str) -> Vec<(String, PosTag)> {
        self.tag_sentence(sentence)
    }
}

#[derive(Debug, Deserialize)]
struct TaggedRecord {
    doc_id: String,
    paragraph_index: usize,
    sentence_index: usize,
    tokens: Vec<(String, String)>,
}

/// Tags read from an external annotation file, keyed by sentence location.
/// Sentences absent from the file fall back to the built-in rules.
#[derive(Debug, Default)]
pub struct PretaggedTagger {
    tags: HashMap<(String, Loc), Vec<(String, PosTag)>>,
    fallback: BuiltinTagger,
}

impl PretaggedTagger {
    pub fn from_file(path: &Path) -> Result<Self> {
        let records: Vec<TaggedRecord> = io::read_jsonl(path)?;
        let mut tags = HashMap::with_capacity(records.len());
        let mut seen = HashSet::new();
        for r in records {
            let loc = Loc::new(r.paragraph_index, r.sentence_index);
            if !seen.insert((r.doc_id.clone(), loc)) {
                return Err(Error::Config(format!(
                    "{}: duplicate tags for {} {:?}",
                    path.display(),
                    r.doc_id,
                    loc
                )));
            }
            let tokens = r
                .tokens
                .into_iter()
                .map(|(tok, tag)| (tok, tag.parse().expect("infallible")))
                .collect();
            tags.insert((r.doc_id, loc), tokens);
        }
        Ok(PretaggedTagger {
            tags,
            fallback: BuiltinTagger,
        })
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }
}

impl Tagger for PretaggedTagger {
    fn tag(&self, key: Option<SentenceKey<'_>>, sentence: &str) -> Vec<(String, PosTag)> {
        key.and_then(|k| self.tags.get(&(k.doc_id.to_string(), k.loc)))
            .cloned()
            .unwrap_or_else(|| self.fallback.tag_sentence(sentence))
    }
}
