use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "captionprobe", version, about = "Compositional caption perturbation and retrieval evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a dataset split through its adapter config and write the canonical corpus.
    Ingest(IngestArgs),
    /// Train the averaged-perceptron tagger on a UPOS corpus.
    TagTrain(TagTrainArgs),
    /// Build the noun/verb replacement vocabulary from a tagged corpus.
    Vocab(VocabArgs),
    /// Write one manifest per perturbation task plus the original captions.
    Perturb(PerturbArgs),
    /// Score manifests against embeddings, a similarity matrix or the mock encoder.
    Eval(EvalArgs),
    /// Combine eval runs into R@1 tables with drops versus the original captions.
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ingest(_) => "ingest",
            Command::TagTrain(_) => "tag-train",
            Command::Vocab(_) => "vocab",
            Command::Perturb(_) => "perturb",
            Command::Eval(_) => "eval",
            Command::Report(_) => "report",
        }
    }

    pub fn out_dir(&self) -> &PathBuf {
        match self {
            Command::Ingest(a) => &a.out,
            Command::TagTrain(a) => &a.out,
            Command::Vocab(a) => &a.out,
            Command::Perturb(a) => &a.out,
            Command::Eval(a) => &a.out,
            Command::Report(a) => &a.out,
        }
    }
}

/// Where captions come from: an adapter config plus split, or a canonical
/// corpus file written by `ingest`.
#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["dataset", "corpus"])))]
pub struct CorpusArgs {
    /// Dataset adapter config (TOML).
    #[arg(long, value_name = "TOML")]
    pub dataset: Option<PathBuf>,
    /// Split to load with --dataset.
    #[arg(long, default_value = "test", requires = "dataset")]
    pub split: String,
    /// Canonical corpus (JSON Lines) written by `ingest`.
    #[arg(long, value_name = "JSONL")]
    pub corpus: Option<PathBuf>,
}

/// Exactly one tag source.
#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("tag_source").required(true).args(["tags", "tagger"])))]
pub struct TagArgs {
    /// Externally produced tag sidecar.
    #[arg(long, value_name = "TSV")]
    pub tags: Option<PathBuf>,
    /// Tagger model written by `tag-train`.
    #[arg(long, value_name = "JSON")]
    pub tagger: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestArgs {
    #[arg(long, value_name = "TOML")]
    pub dataset: PathBuf,
    #[arg(long, default_value = "test")]
    pub split: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TagTrainArgs {
    /// Training corpus: two-column sidecar layout or CoNLL-U.
    #[arg(long, value_name = "FILE")]
    pub train: PathBuf,
    /// Optional held-out corpus; accuracy is recorded in run.json.
    #[arg(long, value_name = "FILE")]
    pub heldout: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VocabArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub tags: TagArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub tags: TagArgs,
    /// Comma-separated task ids, or `all`.
    #[arg(long, default_value = "all")]
    pub tasks: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replacement vocabulary from `vocab`; built from the input corpus when absent.
    #[arg(long, value_name = "JSON")]
    pub vocab: Option<PathBuf>,
    /// Synonym/antonym lexicon (TSV) for the replacement tasks.
    #[arg(long, value_name = "TSV")]
    pub lexicon: Option<PathBuf>,
    /// Which nouns obj_partial keeps: random, keep-first or keep-last.
    #[arg(long, default_value = "random")]
    pub partial_mode: String,
    /// Perturb each sentence separately (multi-sentence paragraphs).
    #[arg(long)]
    pub per_sentence: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("scores").required(true).args(["text_emb", "sim_csv", "mock"])))]
pub struct EvalArgs {
    /// Directory of manifests written by `perturb`.
    #[arg(long, value_name = "DIR")]
    pub manifests: PathBuf,
    /// Comma-separated task ids (may include `original`), or `all` for every manifest present.
    #[arg(long, default_value = "all")]
    pub tasks: String,
    /// Directory holding `<task_id>.cevb` text embeddings.
    #[arg(long, value_name = "DIR", requires = "video_emb")]
    pub text_emb: Option<PathBuf>,
    /// Video embeddings (CEVB).
    #[arg(long, value_name = "CEVB", requires = "text_emb")]
    pub video_emb: Option<PathBuf>,
    /// Directory holding `<task_id>.csv` text-by-video similarity matrices.
    #[arg(long, value_name = "DIR")]
    pub sim_csv: Option<PathBuf>,
    /// Score with the built-in bag-of-words mock encoder.
    #[arg(long)]
    pub mock: bool,
    /// t2v, v2t or both.
    #[arg(long, default_value = "both")]
    pub direction: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReportArgs {
    /// `LABEL=DIR` where DIR is an `eval` output directory; repeatable.
    #[arg(long = "run", value_name = "LABEL=DIR", required = true)]
    pub runs: Vec<String>,
    /// markdown, csv or json.
    #[arg(long, default_value = "markdown")]
    pub format: String,
    #[arg(long)]
    pub out: PathBuf,
}
