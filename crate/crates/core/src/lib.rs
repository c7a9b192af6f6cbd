//! Mining of four-class premise/hypothesis pairs (contrasting, entailment,
//! neutral, reasoning) from document corpora through sentence-initial linking
//! phrases, together with leak-free splitting, stress-test generation and a
//! lexical baseline.

pub mod baseline;
pub mod corpus;
pub mod extract;
pub mod error;
pub mod io;
pub mod label;
pub mod lexicon;
pub mod seed;
pub mod segment;
pub mod split;
pub mod stress;
pub mod synth;
pub mod tagger;

pub use corpus::{CorpusManifest, Document, Loc, Sentence};
pub use error::{Error, Result};
pub use extract::{ExtractConfig, ExtractStats, Extraction, LabeledPair, NeutralStrategy};
pub use label::{Genre, Label};
pub use lexicon::{LinkingLexicon, PhraseMatch};
pub use tagger::{BuiltinTagger, PosTag, Tagger};
