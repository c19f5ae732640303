//! Command-line surface for building matrices, transforming datasets, and
//! running entailment experiments.

mod commands;
mod config;
mod fail;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::Config;
use fail::CliResult;

#[derive(Parser)]
#[command(
    name = "lexent",
    version,
    about = "Word-context vector space models for recognizing lexical entailment"
)]
struct Cli {
    /// KEY=VALUE defaults file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Balapinc,
    Convecs,
    Simdiffs,
}

#[derive(Subcommand)]
enum Command {
    /// Count word-context co-occurrences in a tagged corpus
    Ingest(IngestArgs),
    /// Reweight a count matrix with positive pointwise mutual information
    Ppmi(PpmiArgs),
    /// Factorize a PPMI matrix and write a dense embedding
    Svd(SvdArgs),
    /// Build an entailment dataset from rated relation pairs
    TransformJmth(TransformArgs),
    /// Split a dataset into class-balanced dev1/dev2/test files
    Split(SplitArgs),
    /// Tune algorithm parameters on the two dev splits
    Tune(TuneArgs),
    /// Run an evaluation protocol and write a report
    Evaluate(EvaluateArgs),
}

#[derive(clap::Args)]
pub struct IngestArgs {
    /// Tagged corpus, one sentence per line, tokens as word_TAG
    #[arg(long)]
    pub corpus: PathBuf,
    /// Vocabulary, one term per line (n-grams space-separated)
    #[arg(long)]
    pub vocab: PathBuf,
    /// Prefix for the .matrix.tsv/.vocab.txt/.contexts.txt bundle
    #[arg(long)]
    pub out_prefix: PathBuf,
    /// Context window in tokens on each side [default: 4]
    #[arg(long)]
    pub window: Option<usize>,
    /// general, domain (noun contexts) or function (verb contexts)
    #[arg(long)]
    pub policy: Option<String>,
}

#[derive(clap::Args)]
pub struct PpmiArgs {
    /// Prefix of the count-matrix bundle
    #[arg(long)]
    pub counts_prefix: PathBuf,
    /// Prefix for the PPMI bundle to write
    #[arg(long)]
    pub out_prefix: PathBuf,
}

#[derive(clap::Args)]
pub struct SvdArgs {
    /// Prefix of the PPMI bundle
    #[arg(long)]
    pub ppmi_prefix: PathBuf,
    /// Number of retained factors [default: 100]
    #[arg(long)]
    pub k: Option<usize>,
    /// Singular-value exponent [default: 1.0]
    #[arg(long)]
    pub p: Option<f64>,
    /// general, domain or function [default: general]
    #[arg(long)]
    pub space: Option<String>,
    /// Sketch seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Embedding file to write
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(clap::Args)]
pub struct TransformArgs {
    /// Rated pairs: a<TAB>b<TAB>subcategory<TAB>rating
    #[arg(long)]
    pub rated: PathBuf,
    /// Taxonomy file; the embedded table when omitted
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
    /// Balancing seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dataset file to write
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the step report here
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SplitArgs {
    /// Dataset to split
    #[arg(long)]
    pub dataset: PathBuf,
    /// Shuffle seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction for dev1 [default: 1/3]
    #[arg(long)]
    pub dev1_fraction: Option<f64>,
    /// Fraction for dev2 [default: 1/3]
    #[arg(long)]
    pub dev2_fraction: Option<f64>,
    /// Directory for dev1.tsv, dev2.tsv and test.tsv
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(clap::Args)]
pub struct TuneArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long)]
    pub dev1: PathBuf,
    #[arg(long)]
    pub dev2: PathBuf,
    /// Parameters file to write
    #[arg(long)]
    pub out: PathBuf,
    /// PPMI bundle prefix (balapinc and convecs)
    #[arg(long)]
    pub ppmi_prefix: Option<PathBuf>,
    /// Domain-space PPMI bundle prefix (simdiffs)
    #[arg(long)]
    pub dom_ppmi_prefix: Option<PathBuf>,
    /// Function-space PPMI bundle prefix (simdiffs)
    #[arg(long)]
    pub fun_ppmi_prefix: Option<PathBuf>,
    /// Reference word list (simdiffs)
    #[arg(long)]
    pub references: Option<PathBuf>,
    /// Feature-cap grid, comma-separated [default: 1000..5000]
    #[arg(long)]
    pub max_f_grid: Option<String>,
    /// Factor-count grid [default: 100..500]
    #[arg(long)]
    pub k_grid: Option<String>,
    /// Exponent grid [default: 0.1..1.0 by 0.1]
    #[arg(long)]
    pub p_grid: Option<String>,
    /// Sketch seed for the factorizations [default: 1]
    #[arg(long)]
    pub svd_seed: Option<u64>,
    /// Polynomial degree (convecs) [default: 2]
    #[arg(long)]
    pub degree: Option<u32>,
    /// RBF width (simdiffs) [default: 0.01]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Soft-margin parameter [default: 1.0]
    #[arg(long)]
    pub svm_c: Option<f64>,
    /// Training seed [default: 1]
    #[arg(long)]
    pub svm_seed: Option<u64>,
}

#[derive(clap::Args)]
pub struct EvaluateArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// standard, clustered, balanced or different
    #[arg(long)]
    pub setup: String,
    /// Dataset for the cross-validation setups
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Training dataset (different setup)
    #[arg(long)]
    pub train: Option<PathBuf>,
    /// Test dataset (different setup)
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Downsample class 0 of the test set before evaluating
    #[arg(long, default_value_t = false)]
    pub balance_test: bool,
    /// Fold count for cross-validation [default: 10]
    #[arg(long)]
    pub folds: Option<usize>,
    /// Seed for folds, balancing and training [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Parent directory for the timestamped run directory
    #[arg(long, default_value = "runs")]
    pub out_dir: PathBuf,
    /// Exact run directory (overrides the timestamped name)
    #[arg(long)]
    pub run_dir: Option<PathBuf>,
    /// PPMI bundle prefix (balapinc)
    #[arg(long)]
    pub ppmi_prefix: Option<PathBuf>,
    /// Feature cap (balapinc) [default: 1000]
    #[arg(long)]
    pub max_f: Option<usize>,
    /// Embedding file (convecs)
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    /// Domain embedding file (simdiffs)
    #[arg(long)]
    pub dom_embedding: Option<PathBuf>,
    /// Function embedding file (simdiffs)
    #[arg(long)]
    pub fun_embedding: Option<PathBuf>,
    /// Reference word list (simdiffs)
    #[arg(long)]
    pub references: Option<PathBuf>,
    /// Polynomial degree (convecs) [default: 2]
    #[arg(long)]
    pub degree: Option<u32>,
    /// RBF width (simdiffs) [default: 0.01]
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Soft-margin parameter [default: 1.0]
    #[arg(long)]
    pub svm_c: Option<f64>,
    /// Training seed [default: 1]
    #[arg(long)]
    pub svm_seed: Option<u64>,
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    let config = Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Ingest(args) => commands::run_ingest(args, &config),
        Command::Ppmi(args) => commands::run_ppmi(args, &config),
        Command::Svd(args) => commands::run_svd(args, &config),
        Command::TransformJmth(args) => commands::run_transform(args, &config),
        Command::Split(args) => commands::run_split(args, &config),
        Command::Tune(args) => commands::run_tune(args, &config),
        Command::Evaluate(args) => commands::run_evaluate(args, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are successes, everything else is
            // a usage error (exit code 1)
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
