//! `rwov`: word-order text vectorization and classification experiments.

mod commands;
mod config;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rwov_core::corpus::CorpusFormat;

use crate::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "rwov",
    version,
    about = "Vectorize clinical-style text by relevant word order and compare classifiers"
)]
struct Cli {
    /// Run configuration file; command-line flags override its keys.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Root seed for all randomness (splits, init, bootstrap, synthesis).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Corpus file format.
    #[arg(long, global = true, value_name = "jsonl|csv")]
    format: Option<String>,

    /// Corpus file to read (commands other than synth).
    #[arg(long, global = true, value_name = "PATH")]
    corpus: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic labeled corpus.
    Synth {
        /// Named prevalence preset.
        #[arg(long, default_value = "table1")]
        preset: String,
        /// Number of documents.
        #[arg(long, default_value_t = 300)]
        n: usize,
        /// Fraction of documents with a perturbed label sentence.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Template bank file (defaults to the built-in bank).
        #[arg(long, value_name = "PATH")]
        templates: Option<PathBuf>,
        /// Prevalence override, e.g. --toi ER=0.775 (repeatable).
        #[arg(long = "toi", value_name = "NAME=FRACTION")]
        toi_overrides: Vec<String>,
        /// Output file name inside --out.
        #[arg(long, value_name = "NAME")]
        file: Option<String>,
    },
    /// Fit the word-order vectorizer per TOI and export vocabularies and
    /// feature matrices.
    Vectorize,
    /// Train one (method, TOI, class) model and persist it.
    Train {
        #[arg(long, value_name = "ID")]
        method: String,
        #[arg(long, value_name = "NAME")]
        toi: String,
        /// Which label the model scores as positive.
        #[arg(long, default_value = "pos", value_name = "pos|neg")]
        class: String,
        #[arg(long, value_name = "PATH")]
        model_out: Option<PathBuf>,
    },
    /// Score a corpus with a persisted model.
    Predict {
        #[arg(long, value_name = "PATH")]
        model: PathBuf,
        #[arg(long, value_name = "PATH")]
        predictions_out: Option<PathBuf>,
    },
    /// Cross-validate a single method across the configured TOIs.
    Crossval {
        #[arg(long, value_name = "ID")]
        method: String,
    },
    /// Run the full method grid under shared folds and write the
    /// comparison report with CI and ROC sidecars.
    Compare {
        /// Comma-separated method ids (overrides the config list).
        #[arg(long, value_name = "IDS")]
        methods: Option<String>,
    },
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(format) = &cli.format {
        cfg.format = format
            .parse::<CorpusFormat>()
            .map_err(|e| anyhow::anyhow!(e))?;
    }
    if let Some(corpus) = cli.corpus {
        cfg.corpus = Some(corpus);
    }

    match &cli.command {
        Command::Synth {
            preset,
            n,
            noise,
            templates,
            toi_overrides,
            file,
        } => commands::cmd_synth(
            &cfg,
            &commands::SynthArgs {
                preset: preset.clone(),
                n: *n,
                noise: *noise,
                templates: templates.clone(),
                toi_overrides: toi_overrides.clone(),
                file: file.clone(),
            },
        ),
        Command::Vectorize => commands::cmd_vectorize(&cfg),
        Command::Train {
            method,
            toi,
            class,
            model_out,
        } => commands::cmd_train(&cfg, method, toi, class, model_out.as_deref()),
        Command::Predict {
            model,
            predictions_out,
        } => commands::cmd_predict(&cfg, model, predictions_out.as_deref()),
        Command::Crossval { method } => commands::cmd_crossval(&cfg, method),
        Command::Compare { methods } => commands::cmd_compare(&cfg, methods.as_deref()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
