//! Regenerates the synthetic fixture corpora under `fixtures/corpora`.
//!
//! Usage: cargo run -p nlimine-core --example make_fixtures -- <fixtures dir>

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use nlimine_core::synth::{self, SynthConfig};
use nlimine_core::{CorpusManifest, Genre};
use serde_json::json;

const SEED: u64 = 2024;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    let dir = root.join("corpora");
    fs::create_dir_all(&dir)?;
    let corpora: [(&str, Genre, usize, bool); 4] = [
        ("esarticles__fixwiki", Genre::Articles, 220, false),
        ("esnews__fixnews", Genre::News, 170, false),
        ("estalks__fixted", Genre::Talks, 60, true),
        ("esbooks__fixtiny", Genre::Books, 2, false),
    ];
    let config = SynthConfig {
        max_paragraphs: 5,
        link_rate: 0.5,
        ..SynthConfig::default()
    };
    let mut manifest = BufWriter::new(File::create(dir.join("manifest.jsonl"))?);
    for (corpus_id, genre, n, test_only) in corpora {
        let file = format!("{}.jsonl", corpus_id.rsplit("__").next().unwrap());
        let mut out = BufWriter::new(File::create(dir.join(&file))?);
        for (i, doc) in synth::corpus(corpus_id, genre, n, &config, SEED).iter().enumerate() {
            serde_json::to_writer(&mut out, &json!({"doc_id": doc.doc_id, "paragraphs": doc.paragraphs}))?;
            writeln!(out)?;
            if corpus_id == "esnews__fixnews" && i == 10 {
                // a scraped row with its paragraphs lost
                writeln!(out, r#"{{"doc_id": "fixnews-broken"}}"#)?;
            }
        }
        let entry = CorpusManifest {
            corpus_id: corpus_id.into(),
            genre,
            test_only,
            source_path: file.into(),
        };
        serde_json::to_writer(&mut manifest, &entry)?;
        writeln!(manifest)?;
    }
    Ok(())
}
