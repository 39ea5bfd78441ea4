use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "dqi",
    version,
    about = "Data Quality Index for NLI-style corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute all seven component reports for one corpus.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two corpora, or the good/bad partitions of one.
    Compare {
        /// One corpus whose records carry `partition` tags.
        #[arg(long, conflicts_with_all = ["input_good", "input_bad"], required_unless_present_all = ["input_good", "input_bad"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "input_bad")]
        input_good: Option<PathBuf>,
        #[arg(long, requires = "input_good")]
        input_bad: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score and bin every sample against the configured thresholds.
    Bin {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the feedback service over a corpus snapshot.
    Serve {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        /// Append accepted samples to this file.
        #[arg(long)]
        journal: Option<PathBuf>,
        /// Refit the snapshot after this many accepted samples.
        #[arg(long)]
        refit_interval: Option<usize>,
    },
    /// Dump the all-pairs sentence similarity matrix.
    ExportSim {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML configuration; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `word<TAB>CLASS` lines for part-of-speech tagging.
    #[arg(long, conflicts_with = "pretagged")]
    pub tag_lexicon: Option<PathBuf>,
    /// Tokens already carry `word_TAG` tags.
    #[arg(long)]
    pub pretagged: bool,
    /// Word vectors in text format (`count dims` header) for word similarity.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Comma-separated granularities, overriding the config.
    #[arg(long, value_delimiter = ',')]
    pub granularities: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Precomputed `i j sim` lines over sentence ordinals, replacing TF-IDF.
    #[arg(long)]
    pub sim_matrix: Option<PathBuf>,
}
