use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "depsig", version, about = "Detect signs of depression in social-media posts")]
pub struct Cli {
    /// TOML file with default settings; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for every random choice (splits, subsamples).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for bootstrap runs.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Report format on stdout.
    #[arg(long, global = true, value_enum)]
    pub output: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSetArg {
    Model1,
    Model2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PosInputArg {
    Counts,
    Relfreq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Tsv,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemplateArg {
    Words,
    Pos,
    Read,
    Pnum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassArg {
    #[value(name = "not-depression", alias = "not_depression", alias = "none")]
    NotDepression,
    Moderate,
    Severe,
}

/// How to read a corpus file. Without column flags the header decides:
/// `PID`/`Text_data`/`Label` if present, else `id`/`text`/`label`.
#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Corpus file (TSV or CSV with a header row).
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    /// Override format detection from the file extension.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
    #[arg(long)]
    pub id_col: Option<String>,
    #[arg(long)]
    pub text_col: Option<String>,
    #[arg(long)]
    pub label_col: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub features: Option<FeatureSetArg>,
    /// L2 regularization strength.
    #[arg(long, value_name = "LAMBDA")]
    pub l2: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    /// Whether the POS softmax sees raw tag counts or relative frequencies.
    #[arg(long, value_enum)]
    pub pos_softmax_input: Option<PosInputArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a corpus and report class counts and post lengths.
    Ingest {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Include per-class statistics and the length histogram.
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = 10)]
        histogram_width: usize,
        #[arg(long, value_name = "FILE")]
        histogram_out: Option<PathBuf>,
    },
    /// Stratified train/test split.
    Split {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Share of each class sent to the test file.
        #[arg(long, default_value_t = 0.25)]
        fraction: f64,
        #[arg(long, value_name = "FILE")]
        train_out: PathBuf,
        #[arg(long, value_name = "FILE")]
        test_out: PathBuf,
    },
    /// Train a model and write it to disk.
    Train {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Score a model on a labeled corpus.
    Evaluate {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Write the full report as JSON.
        #[arg(long, value_name = "FILE")]
        report_out: Option<PathBuf>,
        /// Write the confusion matrix as CSV.
        #[arg(long, value_name = "FILE")]
        confusion_out: Option<PathBuf>,
    },
    /// Predict one post or every post of a corpus.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, conflicts_with = "data", required_unless_present = "data")]
        text: Option<String>,
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
        #[arg(long)]
        id_col: Option<String>,
        #[arg(long)]
        text_col: Option<String>,
    },
    /// Dump feature vectors as JSON lines.
    Featurize {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
        #[arg(long)]
        id_col: Option<String>,
        #[arg(long)]
        text_col: Option<String>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Print tokens, tags and morphology of a plain-text file as TSV.
    Analyze {
        /// Text file, or `-` for stdin.
        file: PathBuf,
    },
    /// Rank a model's coefficients.
    Inspect {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, value_enum)]
        template: Option<TemplateArg>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Write the complete ranking as CSV.
        #[arg(long, value_name = "FILE")]
        csv_out: Option<PathBuf>,
    },
    /// Coefficient stability over repeated subsampled trainings.
    Bootstrap {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        train: TrainArgs,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        /// Share of each class kept per run.
        #[arg(long, default_value_t = 0.8)]
        fraction: f64,
        #[arg(long, default_value_t = 5)]
        top: usize,
        #[arg(long, value_enum)]
        template: Option<TemplateArg>,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Write every feature's statistics as CSV.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}
