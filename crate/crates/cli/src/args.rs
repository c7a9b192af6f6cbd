use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "nlimine", version, about = "Mine, split, stress and evaluate four-class NLI pairs")]
pub struct Cli {
    /// Worker threads; outputs do not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract labeled pairs from the corpora listed in a manifest.
    Extract(ExtractArgs),
    /// Assign documents to train/val/test and balance classes.
    Split(SplitArgs),
    /// Write the four stress-test variants of a test split.
    Stress(StressArgs),
    /// Train the lexical baseline.
    #[command(name = "train-baseline")]
    TrainBaseline(TrainArgs),
    /// Evaluate a model (or the majority class) on pair files.
    Evaluate(EvaluateArgs),
    /// Keep only pairs whose label matches the annotators' majority.
    Validate(ValidateArgs),
    /// Count examples per corpus, split, class and genre.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Corpus manifest (one record per corpus).
    #[arg(long, env = "NLIMINE_MANIFEST")]
    pub manifest: PathBuf,
    /// Output pairs file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Neutral pairs per linked pair, per document.
    #[arg(long, default_value_t = 1.0)]
    pub neutral_ratio: f64,
    /// Linking-phrase file replacing the built-in lexicon.
    #[arg(long, env = "NLIMINE_LEXICON")]
    pub lexicon: Option<PathBuf>,
    /// Pre-tagged sentences used instead of the built-in tagger.
    #[arg(long, env = "NLIMINE_TAGS")]
    pub tags: Option<PathBuf>,
    /// Run report path [default: extract_report.json next to --out].
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// Corpus manifest, for the test-only flags.
    #[arg(long, env = "NLIMINE_MANIFEST")]
    pub manifest: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub test_frac: f64,
    /// Fraction of the non-test documents sent to validation.
    #[arg(long, default_value_t = 0.1)]
    pub val_frac: f64,
    /// Sets both --val-cap and --test-cap.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, default_value_t = 15_000)]
    pub val_cap: usize,
    #[arg(long, default_value_t = 15_000)]
    pub test_cap: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StressArgs {
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    /// Output model file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Use premise features only.
    #[arg(long)]
    pub premise_only: bool,
    #[arg(long, default_value_t = 40)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.2)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 2)]
    pub min_count: usize,
    #[arg(long, default_value_t = 50_000)]
    pub max_vocab: usize,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("predictor").required(true).args(["model", "majority"])))]
pub struct EvaluateArgs {
    /// Model written by train-baseline.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Predict the most frequent class of this training file instead.
    #[arg(long)]
    pub majority: Option<PathBuf>,
    /// Pair files to evaluate; one result row each.
    #[arg(long, required = true, num_args = 1..)]
    pub pairs: Vec<PathBuf>,
    /// Corpus manifest, used to mark out-of-domain corpora.
    #[arg(long, env = "NLIMINE_MANIFEST")]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub by_genre: bool,
    #[arg(long)]
    pub by_corpus: bool,
    #[arg(long)]
    pub confusion: bool,
    /// Machine-readable results.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long)]
    pub annotations: PathBuf,
    /// Retained pairs.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Pair files; each becomes a column named after its file stem.
    #[arg(long, required = true, num_args = 1..)]
    pub pairs: Vec<PathBuf>,
    /// Also list the K most frequent tokens per class.
    #[arg(long)]
    pub tokens: Option<usize>,
    /// Stopword file (one word per line) replacing the built-in list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Machine-readable results.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}
