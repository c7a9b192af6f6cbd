//! Subcommand implementations.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use nlimine_core::baseline::{
    self, class_token_report, evaluate_constant, majority_filter, majority_label, AnnotationRecord,
    BaselineConfig, BaselineModel, EvalReport, TrainParams,
};
use nlimine_core::extract::{extract_corpus, ExtractConfig, ExtractStats};
use nlimine_core::split::{assign_documents, balance_split, documents_of, Split, SplitConfig};
use nlimine_core::stress::generate_stress_suite;
use nlimine_core::tagger::PretaggedTagger;
use nlimine_core::{corpus, io, BuiltinTagger, Genre, Label, LabeledPair, LinkingLexicon, Tagger};
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::report::{self, DatasetStats, RunReport};
use crate::ConfigError;

/// Maps core errors that stem from configuration onto exit status 2.
fn core_err(e: nlimine_core::Error) -> anyhow::Error {
    match e {
        nlimine_core::Error::Config(m) | nlimine_core::Error::Manifest(m) => ConfigError(m).into(),
        nlimine_core::Error::MissingClass(l) => {
            ConfigError(format!("training data has no `{l}` examples")).into()
        }
        other => other.into(),
    }
}

fn require_file(path: &Path, what: &str) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(ConfigError(format!("{what} `{}` does not exist", path.display())).into())
    }
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    path.parent().unwrap_or(Path::new("")).join(name)
}

fn read_pairs(path: &Path) -> Result<Vec<LabeledPair>> {
    io::read_jsonl(path).map_err(core_err)
}

fn test_only_corpora(manifest: &Path) -> Result<BTreeSet<String>> {
    Ok(corpus::load_manifest(manifest)
        .map_err(core_err)?
        .into_iter()
        .filter(|m| m.test_only)
        .map(|m| m.corpus_id)
        .collect())
}

/// A finished subcommand: where its run report goes and what it holds.
pub struct Outcome {
    pub report_path: PathBuf,
    pub report: RunReport,
}

pub fn extract(a: &ExtractArgs) -> Result<Outcome> {
    require_file(&a.manifest, "manifest")?;
    if !(a.neutral_ratio.is_finite() && a.neutral_ratio >= 0.0) {
        return Err(ConfigError(format!("--neutral-ratio must be a non-negative number, got {}", a.neutral_ratio)).into());
    }
    if let Some(p) = &a.lexicon {
        require_file(p, "lexicon")?;
    }
    if let Some(p) = &a.tags {
        require_file(p, "tags file")?;
    }
    let manifests = corpus::load_manifest(&a.manifest).map_err(core_err)?;
    for m in &manifests {
        require_file(&m.source_path, &format!("source of corpus {}", m.corpus_id))?;
    }
    let lexicon = match &a.lexicon {
        Some(p) => LinkingLexicon::from_file(p).map_err(core_err)?,
        None => LinkingLexicon::default(),
    };
    let tagger: Box<dyn Tagger> = match &a.tags {
        Some(p) => Box::new(PretaggedTagger::from_file(p).map_err(core_err)?),
        None => Box::new(BuiltinTagger),
    };

    let mut report = RunReport::new("extract", Some(a.seed));
    report.input("manifest", &a.manifest)?;
    if let Some(p) = &a.lexicon {
        report.input("lexicon", p)?;
    }
    if let Some(p) = &a.tags {
        report.input("tags", p)?;
    }
    let config = ExtractConfig {
        neutral_ratio: a.neutral_ratio,
        seed: a.seed,
    };
    let mut manifests = manifests;
    manifests.sort_by(|x, y| x.corpus_id.cmp(&y.corpus_id));
    let mut pairs = Vec::new();
    let mut total = ExtractStats::default();
    let mut per_corpus = BTreeMap::new();
    for m in &manifests {
        report.input(&format!("corpus {}", m.corpus_id), &m.source_path)?;
        let ex = extract_corpus(m, &lexicon, tagger.as_ref(), &config).map_err(core_err)?;
        if ex.stats.malformed_records > 0 {
            report.warnings.push(format!(
                "{}: {} malformed records skipped",
                m.corpus_id, ex.stats.malformed_records
            ));
        }
        let mut by_label: BTreeMap<Label, usize> = Label::ALL.iter().map(|l| (*l, 0)).collect();
        for p in &ex.pairs {
            *by_label.get_mut(&p.label).unwrap() += 1;
        }
        per_corpus.insert(m.corpus_id.clone(), json!({"stats": ex.stats, "pairs_per_class": by_label}));
        total += ex.stats;
        pairs.extend(ex.pairs);
    }
    io::write_jsonl(&a.out, &pairs).map_err(core_err)?;
    report.count("pairs_written", pairs.len());
    report.count_all(&total)?;
    report.count("counters_consistent", total.is_consistent());
    report.cells = serde_json::to_value(per_corpus)?;
    log::info!("wrote {} pairs to {}", pairs.len(), a.out.display());
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| sibling(&a.out, "extract_report.json")),
        report,
    })
}

pub fn split(a: &SplitArgs) -> Result<Outcome> {
    require_file(&a.pairs, "pairs file")?;
    require_file(&a.manifest, "manifest")?;
    let config = SplitConfig {
        test_fraction: a.test_frac,
        val_fraction_of_remainder: a.val_frac,
        val_cap_per_corpus: a.cap.unwrap_or(a.val_cap),
        test_cap_per_corpus: a.cap.unwrap_or(a.test_cap),
        seed: a.seed,
    };
    config.validate().map_err(core_err)?;
    let test_only = test_only_corpora(&a.manifest)?;
    let pairs = read_pairs(&a.pairs)?;
    let mut report = RunReport::new("split", Some(a.seed));
    report.input("pairs", &a.pairs)?;
    report.input("manifest", &a.manifest)?;
    report.count("pairs_read", pairs.len());

    let docs = documents_of(&pairs, &test_only);
    let mut manifest = if docs.is_empty() {
        Default::default()
    } else {
        assign_documents(&docs, &config).map_err(core_err)?
    };
    let balanced = balance_split(&pairs, &mut manifest, &config).map_err(core_err)?;
    for s in Split::ALL {
        let out: Vec<&LabeledPair> = balanced.split(s).collect();
        io::write_jsonl(&a.out_dir.join(format!("{s}.jsonl")), out).map_err(core_err)?;
        report.count(&format!("{s}_pairs"), balanced.split(s).count());
        report.count(
            &format!("{s}_documents"),
            manifest.assignment.iter().filter(|r| r.split == s).count(),
        );
    }
    io::write_json(&a.out_dir.join("split_manifest.json"), &manifest).map_err(core_err)?;
    report.cells = serde_json::to_value(&manifest.counts)?;
    report.warnings = manifest.warnings.clone();
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| a.out_dir.join("split_report.json")),
        report,
    })
}

pub fn stress(a: &StressArgs) -> Result<Outcome> {
    require_file(&a.test, "test file")?;
    let test = read_pairs(&a.test)?;
    let mut report = RunReport::new("stress", Some(a.seed));
    report.input("test", &a.test)?;
    for (kind, pairs) in generate_stress_suite(&test, a.seed) {
        let path = a.out_dir.join(format!("{}.jsonl", kind.file_stem()));
        io::write_jsonl(&path, &pairs).map_err(core_err)?;
        report.count(&format!("{kind}_pairs"), pairs.len());
        let unmodified = pairs.iter().filter(|p| p.unmodified).count();
        if unmodified > 0 {
            report.count(&format!("{kind}_unmodified"), unmodified);
        }
    }
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| a.out_dir.join("stress_report.json")),
        report,
    })
}

pub fn train_baseline(a: &TrainArgs) -> Result<Outcome> {
    require_file(&a.train, "training file")?;
    if a.epochs == 0 || a.batch_size == 0 || a.learning_rate.is_nan() || a.learning_rate <= 0.0 || a.l2.is_nan() || a.l2 < 0.0 {
        return Err(ConfigError(
            "--epochs and --batch-size must be positive, --learning-rate > 0 and --l2 >= 0".into(),
        )
        .into());
    }
    let pairs = read_pairs(&a.train)?;
    let config = BaselineConfig {
        premise_only: a.premise_only,
        min_count: a.min_count,
        max_vocab: a.max_vocab,
        params: TrainParams {
            epochs: a.epochs,
            learning_rate: a.learning_rate,
            l2: a.l2,
            batch_size: a.batch_size,
        },
        seed: a.seed,
    };
    let model = BaselineModel::train(&pairs, &config).map_err(core_err)?;
    io::write_json(&a.out, &model).map_err(core_err)?;
    let train_report = model.evaluate(&pairs, &BTreeSet::new());

    let mut report = RunReport::new("train-baseline", Some(a.seed));
    report.input("train", &a.train)?;
    report.count("model", model.kind.clone());
    report.count("premise_only", a.premise_only);
    report.count("training_pairs", pairs.len());
    report.count("vocabulary_size", model.vocabulary.len());
    report.count("epochs", a.epochs);
    report.count("final_loss", model.model.loss_history.last().copied().unwrap_or(f64::NAN));
    report.count("training_accuracy", train_report.accuracy);
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| sibling(&a.out, "train_report.json")),
        report,
    })
}

#[derive(Serialize)]
struct EvaluationOutput<'a> {
    model: &'a str,
    premise_only: bool,
    results: Vec<NamedReport<'a>>,
}

#[derive(Serialize)]
struct NamedReport<'a> {
    test_set: &'a str,
    report: &'a EvalReport,
}

pub fn evaluate(a: &EvaluateArgs) -> Result<Outcome> {
    for p in &a.pairs {
        require_file(p, "pairs file")?;
    }
    let test_only = match &a.manifest {
        Some(m) => {
            require_file(m, "manifest")?;
            test_only_corpora(m)?
        }
        None => BTreeSet::new(),
    };
    let mut report = RunReport::new("evaluate", None);
    enum Predictor {
        Model(Box<BaselineModel>),
        Constant(Label),
    }
    let (predictor, name, premise_only) = match (&a.model, &a.majority) {
        (Some(path), _) => {
            require_file(path, "model")?;
            report.input("model", path)?;
            let mut m: BaselineModel = io::read_json(path).map_err(core_err)?;
            m.prepare();
            let name = if m.premise_only { "lexical baseline (premise only)" } else { "lexical baseline" };
            let po = m.premise_only;
            (Predictor::Model(Box::new(m)), name.to_string(), po)
        }
        (None, Some(path)) => {
            require_file(path, "training file")?;
            report.input("majority", path)?;
            let label = majority_label(&read_pairs(path)?);
            report.count("majority_label", label.as_str());
            (Predictor::Constant(label), "majority class".to_string(), false)
        }
        (None, None) => unreachable!("clap requires --model or --majority"),
    };

    let mut results = Vec::new();
    for path in &a.pairs {
        report.input("pairs", path)?;
        let pairs = read_pairs(path)?;
        if pairs.is_empty() {
            report.warnings.push(format!("{}: no pairs", path.display()));
        }
        let r = match &predictor {
            Predictor::Model(m) => m.evaluate(&pairs, &test_only),
            Predictor::Constant(l) => evaluate_constant(&pairs, *l, &test_only),
        };
        results.push((report::split_name(path), r));
    }

    println!("{}", report::render_summary(&name, &results));
    for (n, r) in &results {
        println!("{}", report::render_per_class(n, r));
        if a.confusion {
            println!("{}", report::render_confusion(n, r));
        }
        if a.by_genre {
            println!("{}", report::render_by_genre(n, r));
        }
        if a.by_corpus {
            println!("{}", report::render_by_corpus(n, r));
        }
    }
    for (n, r) in &results {
        report.count(&format!("{n}_accuracy"), r.accuracy);
        report.count(&format!("{n}_macro_f1"), r.macro_f1);
    }
    if let Some(out) = &a.out {
        let output = EvaluationOutput {
            model: &name,
            premise_only,
            results: results
                .iter()
                .map(|(n, r)| NamedReport { test_set: n, report: r })
                .collect(),
        };
        io::write_json(out, &output).map_err(core_err)?;
    }
    let anchor = a.out.as_ref().unwrap_or(&a.pairs[0]);
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| sibling(anchor, "evaluate_report.json")),
        report,
    })
}

pub fn validate(a: &ValidateArgs) -> Result<Outcome> {
    require_file(&a.pairs, "pairs file")?;
    require_file(&a.annotations, "annotations file")?;
    let pairs = read_pairs(&a.pairs)?;
    let annotations: Vec<AnnotationRecord> = io::read_jsonl(&a.annotations).map_err(core_err)?;
    let (kept, result) = majority_filter(&pairs, &annotations);
    for w in &result.warnings {
        log::warn!("{w}");
    }
    let annotated: HashSet<&str> = annotations.iter().map(|r| r.pair_id.as_str()).collect();
    let mut per_class: BTreeMap<Label, usize> = BTreeMap::new();
    let mut per_genre: BTreeMap<Genre, usize> = BTreeMap::new();
    for p in pairs.iter().filter(|p| annotated.contains(p.pair_id.as_str())) {
        *per_class.entry(p.label).or_default() += 1;
        *per_genre.entry(p.genre).or_default() += 1;
    }
    println!("{}", report::render_validation(&result, &per_class, &per_genre));
    if let Some(out) = &a.out {
        io::write_jsonl(out, &kept).map_err(core_err)?;
    }
    let mut report = RunReport::new("validate", None);
    report.input("pairs", &a.pairs)?;
    report.input("annotations", &a.annotations)?;
    report.count("annotations", annotations.len());
    report.count("annotated_pairs", per_class.values().sum::<usize>());
    report.count_all(&result)?;
    report.counters.remove("warnings");
    report.warnings = result.warnings.clone();
    let anchor = a.out.as_ref().unwrap_or(&a.pairs);
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| sibling(anchor, "validate_report.json")),
        report,
    })
}

pub fn stats(a: &StatsArgs) -> Result<Outcome> {
    for p in &a.pairs {
        require_file(p, "pairs file")?;
    }
    let stopwords = match &a.stopwords {
        Some(p) => {
            require_file(p, "stopword file")?;
            std::fs::read_to_string(p)
                .with_context(|| format!("reading {}", p.display()))?
                .lines()
                .map(|l| l.trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect()
        }
        None => baseline::tokens::default_stopwords(),
    };
    let mut report = RunReport::new("stats", None);
    let mut files = Vec::new();
    for p in &a.pairs {
        report.input("pairs", p)?;
        files.push((report::split_name(p), read_pairs(p)?));
    }
    let stats = DatasetStats::from_files(&files);
    println!("{}", stats.render());
    let tokens = a.tokens.map(|k| {
        let all: Vec<LabeledPair> = files.iter().flat_map(|(_, v)| v.iter().cloned()).collect();
        class_token_report(&all, k, &stopwords)
    });
    if let Some(t) = &tokens {
        println!("{}", report::render_tokens(t));
    }
    if let Some(out) = &a.out {
        io::write_json(out, &json!({"stats": stats, "tokens": tokens})).map_err(core_err)?;
    }
    report.count("total", stats.total);
    report.count_all(&json!({"per_split": stats.split_totals, "per_class": stats.label_totals}))?;
    let anchor = a.out.as_ref().unwrap_or(&a.pairs[0]);
    Ok(Outcome {
        report_path: a.report.clone().unwrap_or_else(|| sibling(anchor, "stats_report.json")),
        report,
    })
}
