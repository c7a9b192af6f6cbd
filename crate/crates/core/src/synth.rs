//! Deterministic generator of small Spanish-like corpora.
//!
//! Documents are built from a fixed phrase inventory. Sentences that open
//! with a linking phrase carry, with probability `cue_rate`, a clause drawn
//! from a class-specific word list, so a lexical model has something to
//! learn from the hypothesis side while premises stay class-neutral.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::label::{Genre, Label};
use crate::lexicon::LinkingLexicon;
use crate::seed::rng_for;

const SUBJECTS: &[&str] = &[
    "el ingeniero", "la comisión", "el equipo", "la ciudad", "el gobierno", "la empresa",
    "el museo", "la escuela", "el autor", "la orquesta", "el hospital", "la biblioteca",
    "el consejo", "la universidad", "el jurado", "la cooperativa", "el Dr. Ruiz",
    "la Sra. Gómez", "el club", "la fundación",
];

const VERBS: &[&str] = &[
    "presentó", "construyó", "publicó", "aprobó", "recibió", "organizó", "describió",
    "analizó", "vendió", "abrió", "renovó", "financió", "diseñó", "amplió", "revisó",
];

const OBJECTS: &[&str] = &[
    "un informe", "una propuesta", "el proyecto", "una exposición", "un libro", "la reforma",
    "un puente", "el festival", "una campaña", "el reglamento", "un concurso", "la sede",
    "un programa", "el archivo", "una colección",
];

const MODIFIERS: &[&str] = &[
    "durante el invierno", "en la capital", "a finales de marzo", "tras varios meses",
    "en 2019", "con apoyo local", "junto al puerto", "en la región norte", "el año pasado",
    "ante el público", "en la plaza mayor", "con 3.5 millones",
];

const CONTRASTING_CUES: &[&str] = &[
    "solo en caso de emergencia", "si el presupuesto lo permite", "pese a las críticas",
    "aunque con serias dudas", "en caso contrario", "si nadie lo impide",
    "con un alcance muy limitado", "a pesar de la oposición",
];

const ENTAILMENT_CUES: &[&str] = &[
    "con varios tipos de actividades", "que incluye diversas secciones",
    "con todo detalle", "en términos generales", "con ejemplos concretos",
    "que abarca distintas áreas", "con una descripción completa", "de forma detallada",
];

const REASONING_CUES: &[&str] = &[
    "debido al aumento de la demanda", "a causa de la crisis", "gracias a la inversión",
    "por el crecimiento de la población", "como resultado del acuerdo",
    "lo que permitió nuevas obras", "debido a la falta de espacio", "a causa del éxito",
];

/// Fragments without a verb; they fail the completeness filter.
const FRAGMENTS: &[&str] = &[
    "Rápidamente y sin más.", "Nada nuevo.", "Sin grandes cambios.", "Muy lejos de aquí.",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub min_paragraphs: usize,
    pub max_paragraphs: usize,
    pub min_sentences: usize,
    pub max_sentences: usize,
    /// Probability that a non-initial sentence opens with a linking phrase.
    pub link_rate: f64,
    /// Probability that a linked sentence carries a class cue clause.
    pub cue_rate: f64,
    /// Probability that a sentence is replaced by a verbless fragment.
    pub fragment_rate: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            min_paragraphs: 2,
            max_paragraphs: 4,
            min_sentences: 2,
            max_sentences: 6,
            link_rate: 0.45,
            cue_rate: 0.7,
            fragment_rate: 0.05,
        }
    }
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).expect("non-empty inventory")
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn clause<R: Rng>(rng: &mut R, cue: Option<Label>) -> String {
    let tail = match cue {
        Some(Label::Contrasting) => pick(rng, CONTRASTING_CUES),
        Some(Label::Entailment) => pick(rng, ENTAILMENT_CUES),
        Some(Label::Reasoning) => pick(rng, REASONING_CUES),
        _ => pick(rng, MODIFIERS),
    };
    format!("{} {} {} {}", pick(rng, SUBJECTS), pick(rng, VERBS), pick(rng, OBJECTS), tail)
}

fn sentence<R: Rng>(rng: &mut R, first: bool, lexicon: &LinkingLexicon, config: &SynthConfig) -> String {
    if rng.gen_bool(config.fragment_rate) {
        return pick(rng, FRAGMENTS).to_string();
    }
    if !first && rng.gen_bool(config.link_rate) {
        let label = *Label::LINKED.choose(rng).expect("three linked classes");
        let phrases = lexicon.phrases(label);
        if let Some(phrase) = phrases.choose(rng) {
            let cue = rng.gen_bool(config.cue_rate).then_some(label);
            return format!("{}, {}.", capitalize(phrase), clause(rng, cue));
        }
    }
    format!("{}.", capitalize(&clause(rng, None)))
}

/// One document; identical arguments give an identical document.
pub fn document(
    corpus_id: &str,
    genre: Genre,
    doc_id: &str,
    config: &SynthConfig,
    seed: u64,
) -> Document {
    let mut rng = rng_for(seed, &["synth", corpus_id, doc_id]);
    let lexicon = LinkingLexicon::default();
    let n_par = rng.gen_range(config.min_paragraphs..=config.max_paragraphs);
    let paragraphs = (0..n_par)
        .map(|_| {
            let n = rng.gen_range(config.min_sentences..=config.max_sentences);
            (0..n)
                .map(|i| sentence(&mut rng, i == 0, &lexicon, config))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    Document {
        doc_id: doc_id.to_string(),
        corpus_id: corpus_id.to_string(),
        genre,
        paragraphs,
    }
}

/// `n_docs` documents with ids `<prefix>-0000`, `<prefix>-0001`, ...
pub fn corpus(
    corpus_id: &str,
    genre: Genre,
    n_docs: usize,
    config: &SynthConfig,
    seed: u64,
) -> Vec<Document> {
    let prefix = corpus_id.rsplit("__").next().unwrap_or(corpus_id);
    (0..n_docs)
        .map(|i| document(corpus_id, genre, &format!("{prefix}-{i:04}"), config, seed))
        .collect()
}
