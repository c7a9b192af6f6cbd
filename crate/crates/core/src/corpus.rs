//! Document and corpus model, plus ingestion of corpus files.

use std::collections::HashSet;
use std::io::{BufRead, Lines};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::io;
use crate::label::Genre;

/// One source article: the unit of split assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub corpus_id: String,
    pub genre: Genre,
    pub paragraphs: Vec<String>,
}

/// A sentence located inside a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub doc_id: String,
    pub paragraph_index: usize,
    pub sentence_index: usize,
}

impl Sentence {
    pub fn loc(&self) -> Loc {
        Loc {
            paragraph: self.paragraph_index,
            sentence: self.sentence_index,
        }
    }
}

/// (paragraph, sentence) position inside one document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Loc {
    pub paragraph: usize,
    pub sentence: usize,
}

impl Loc {
    pub fn new(paragraph: usize, sentence: usize) -> Self {
        Loc {
            paragraph,
            sentence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub corpus_id: String,
    pub genre: Genre,
    #[serde(default)]
    pub test_only: bool,
    pub source_path: PathBuf,
}

#[derive(Deserialize)]
struct RawManifest {
    corpus_id: String,
    genre: String,
    #[serde(default)]
    test_only: bool,
    source_path: PathBuf,
}

/// Reads a corpora manifest: one JSON record per corpus. Relative source
/// paths are resolved against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<CorpusManifest>> {
    let raw: Vec<RawManifest> = io::read_jsonl(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for r in raw {
        let genre: Genre = r
            .genre
            .parse()
            .map_err(|e| Error::Manifest(format!("corpus `{}`: {e}", r.corpus_id)))?;
        if r.corpus_id.trim().is_empty() {
            return Err(Error::Manifest("empty corpus_id".into()));
        }
        if !seen.insert(r.corpus_id.clone()) {
            return Err(Error::Manifest(format!(
                "corpus `{}` listed twice",
                r.corpus_id
            )));
        }
        let source_path = if r.source_path.is_absolute() {
            r.source_path
        } else {
            base.join(r.source_path)
        };
        out.push(CorpusManifest {
            corpus_id: r.corpus_id,
            genre,
            test_only: r.test_only,
            source_path,
        });
    }
    Ok(out)
}

#[derive(Deserialize)]
struct RawDocument {
    doc_id: Option<String>,
    paragraphs: Option<Vec<String>>,
}

/// Streaming reader over a corpus file. Malformed records are skipped and
/// counted in [`DocumentReader::skipped`].
pub struct DocumentReader<R> {
    lines: Lines<R>,
    manifest: CorpusManifest,
    seen: HashSet<String>,
    line_no: usize,
    skipped: usize,
}

impl<R: BufRead> DocumentReader<R> {
    pub fn new(reader: R, manifest: CorpusManifest) -> Self {
        DocumentReader {
            lines: reader.lines(),
            manifest,
            seen: HashSet::new(),
            line_no: 0,
            skipped: 0,
        }
    }

    pub fn skipped(&self) -> usize {
        self.skipped
    }

    fn parse(&mut self, line: &str) -> Option<Document> {
        let raw: RawDocument = match serde_json::from_str(line) {
            Ok(r) => r,
            Err(e) => {
                log::warn!(
                    "{}:{}: malformed record: {e}",
                    self.manifest.corpus_id,
                    self.line_no
                );
                return None;
            }
        };
        let doc_id = raw.doc_id.map(|d| d.trim().to_string()).filter(|d| !d.is_empty());
        let (Some(doc_id), Some(paragraphs)) = (doc_id, raw.paragraphs) else {
            log::warn!(
                "{}:{}: record lacks doc_id or paragraphs",
                self.manifest.corpus_id,
                self.line_no
            );
            return None;
        };
        let paragraphs: Vec<String> = paragraphs
            .iter()
            .map(|p| p.nfc().collect::<String>().trim().to_string())
            .filter(|p| !p.is_empty())
            .collect();
        if paragraphs.is_empty() {
            log::warn!(
                "{}:{}: document `{doc_id}` has no text",
                self.manifest.corpus_id,
                self.line_no
            );
            return None;
        }
        let doc_id: String = doc_id.nfc().collect();
        if !self.seen.insert(doc_id.clone()) {
            log::warn!(
                "{}:{}: duplicate doc_id `{doc_id}`",
                self.manifest.corpus_id,
                self.line_no
            );
            return None;
        }
        Some(Document {
            doc_id,
            corpus_id: self.manifest.corpus_id.clone(),
            genre: self.manifest.genre,
            paragraphs,
        })
    }
}

impl<R: BufRead> Iterator for DocumentReader<R> {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(Error::io(&self.manifest.source_path, e))),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            match self.parse(&line) {
                Some(doc) => return Some(Ok(doc)),
                None => self.skipped += 1,
            }
        }
    }
}

/// Opens the corpus file named by `manifest`. A missing file is fatal.
pub fn open_corpus(
    manifest: &CorpusManifest,
) -> Result<DocumentReader<std::io::BufReader<std::fs::File>>> {
    let reader = io::open(&manifest.source_path)?;
    Ok(DocumentReader::new(reader, manifest.clone()))
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub documents: Vec<Document>,
    pub skipped: usize,
}

/// Loads a whole corpus in file order.
pub fn load_corpus(manifest: &CorpusManifest) -> Result<LoadedCorpus> {
    let mut reader = open_corpus(manifest)?;
    let mut documents = Vec::new();
    for doc in reader.by_ref() {
        documents.push(doc?);
    }
    Ok(LoadedCorpus {
        documents,
        skipped: reader.skipped(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> CorpusManifest {
        CorpusManifest {
            corpus_id: "esarticles__test".into(),
            genre: Genre::Articles,
            test_only: false,
            source_path: "mem".into(),
        }
    }

    fn read(text: &str) -> (Vec<Document>, usize) {
        let mut reader = DocumentReader::new(text.as_bytes(), manifest());
        let docs: Vec<_> = reader.by_ref().map(|d| d.unwrap()).collect();
        (docs, reader.skipped())
    }

    #[test]
    fn well_formed_records_pass_through() {
        let (docs, skipped) = read(
            "{\"doc_id\":\"a\",\"paragraphs\":[\"Uno.\"]}\n{\"doc_id\":\"b\",\"paragraphs\":[\"Dos.\",\"Tres.\"]}\n",
        );
        assert_eq!(docs.len(), 2);
        assert_eq!(skipped, 0);
        assert_eq!(docs[1].paragraphs.len(), 2);
        assert_eq!(docs[0].corpus_id, "esarticles__test");
    }

    #[test]
    fn record_without_paragraphs_is_skipped() {
        let (docs, skipped) = read("{\"doc_id\":\"a\",\"paragraphs\":[\"Uno.\"]}\n{\"doc_id\":\"b\"}\n");
        assert_eq!(docs.len(), 1);
        assert_eq!(skipped, 1);
    }

    #[test]
    fn garbage_blank_and_duplicate_lines() {
        let (docs, skipped) = read(
            "not json\n\n{\"doc_id\":\"a\",\"paragraphs\":[\"  \", \"x\"]}\n{\"doc_id\":\"a\",\"paragraphs\":[\"y\"]}\n{\"doc_id\":\"c\",\"paragraphs\":[\" \"]}\n",
        );
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].paragraphs, vec!["x".to_string()]);
        assert_eq!(skipped, 3);
    }

    #[test]
    fn text_is_nfc_normalized() {
        // "é" written as e + combining acute
        let (docs, _) = read("{\"doc_id\":\"a\",\"paragraphs\":[\"cafe\u{301}\"]}\n");
        assert_eq!(docs[0].paragraphs[0], "caf\u{e9}");
    }

    #[test]
    fn missing_file_is_fatal() {
        let mut m = manifest();
        m.source_path = "/nonexistent/corpus.jsonl".into();
        assert!(matches!(load_corpus(&m), Err(Error::Io { .. })));
    }
}
