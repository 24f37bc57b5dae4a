//! Plain-text run configuration: sectioned key = value file, overridable
//! by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rwov_core::corpus::{preset, CorpusFormat};
use rwov_core::eval::{CrossvalOptions, ModelHypers, ToiSpec};
use rwov_core::models::{MlpHyper, SvmHyper};
use rwov_core::textprep::{load_stopwords, PipelineConfig};

#[derive(Debug, Clone)]
pub struct ToiEntry {
    pub name: String,
    pub aliases: Vec<String>,
}

/// Everything a run needs; every field has a default so a bare command
/// line works without a config file.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub format: CorpusFormat,
    pub seed: u64,
    pub out: PathBuf,
    pub tois: Vec<ToiEntry>,
    pub methods: Vec<String>,
    pub top_words: usize,
    pub stopwords_file: Option<PathBuf>,
    pub baseline_full_text: bool,
    pub stem_toi: bool,
    pub folds: usize,
    pub bootstrap: usize,
    pub level: f64,
    pub svm_lambda: f64,
    pub svm_learning_rate: f64,
    pub svm_epochs: usize,
    pub mlp_hidden: Vec<usize>,
    pub mlp_learning_rate: f64,
    pub mlp_epochs: usize,
    pub mlp_batch_size: usize,
    pub mlp_l2: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let svm = SvmHyper::<f64>::default();
        let mlp = MlpHyper::<f64>::default();
        RunConfig {
            corpus: None,
            format: CorpusFormat::Jsonl,
            seed: 7,
            out: PathBuf::from("."),
            tois: Vec::new(),
            methods: Vec::new(),
            top_words: 20,
            stopwords_file: None,
            baseline_full_text: false,
            stem_toi: false,
            folds: 3,
            bootstrap: 1000,
            level: 0.95,
            svm_lambda: svm.lambda,
            svm_learning_rate: svm.learning_rate,
            svm_epochs: svm.epochs,
            mlp_hidden: vec![16],
            mlp_learning_rate: mlp.learning_rate,
            mlp_epochs: mlp.epochs,
            mlp_batch_size: mlp.batch_size,
            mlp_l2: mlp.l2,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let raw = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        parse(&raw).with_context(|| format!("parsing config {}", path.display()))
    }

    /// TOIs for the run: configured ones, or the built-in receptor preset.
    pub fn tois_or_default(&self) -> Vec<ToiEntry> {
        if !self.tois.is_empty() {
            return self.tois.clone();
        }
        preset("table1")
            .expect("builtin preset exists")
            .into_iter()
            .map(|p| ToiEntry {
                name: p.name,
                aliases: p.aliases,
            })
            .collect()
    }

    pub fn toi_specs(&self) -> Result<Vec<ToiSpec>> {
        self.tois_or_default()
            .iter()
            .map(|entry| {
                let mut pipeline =
                    PipelineConfig::new(&entry.name.to_lowercase(), &entry.aliases)
                        .with_context(|| format!("toi {}", entry.name))?
                        .with_stem_toi(self.stem_toi);
                if let Some(file) = &self.stopwords_file {
                    let words = load_stopwords(file)
                        .with_context(|| format!("stopword file {}", file.display()))?;
                    pipeline = pipeline.with_stopwords(words);
                }
                Ok(ToiSpec {
                    name: entry.name.clone(),
                    pipeline,
                })
            })
            .collect()
    }

    pub fn crossval_options(&self) -> CrossvalOptions<f64> {
        CrossvalOptions {
            n_top_words: self.top_words,
            folds: self.folds,
            bootstrap: self.bootstrap,
            level: self.level,
            seed: self.seed,
            hypers: ModelHypers {
                svm: SvmHyper {
                    lambda: self.svm_lambda,
                    epochs: self.svm_epochs,
                    learning_rate: self.svm_learning_rate,
                    seed: 0,
                },
                mlp: MlpHyper {
                    learning_rate: self.mlp_learning_rate,
                    epochs: self.mlp_epochs,
                    batch_size: self.mlp_batch_size,
                    l2: self.mlp_l2,
                    seed: 0,
                },
                hidden: self.mlp_hidden.clone(),
            },
            baseline_full_text: self.baseline_full_text,
        }
    }
}

pub fn parse(raw: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    #[derive(PartialEq)]
    enum Section {
        Top,
        Pipeline,
        Toi(usize),
        Methods,
        Svm,
        Mlp,
        Eval,
    }
    let mut section = Section::Top;
    for (idx, line) in raw.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let parts: Vec<&str> = header.split_whitespace().collect();
            section = match parts.as_slice() {
                ["pipeline"] => Section::Pipeline,
                ["methods"] => Section::Methods,
                ["svm"] => Section::Svm,
                ["mlp"] => Section::Mlp,
                ["eval"] => Section::Eval,
                ["toi", name] => {
                    cfg.tois.push(ToiEntry {
                        name: name.to_string(),
                        aliases: Vec::new(),
                    });
                    Section::Toi(cfg.tois.len() - 1)
                }
                _ => bail!("line {line_no}: unknown section [{header}]"),
            };
            continue;
        }
        if section == Section::Methods {
            cfg.methods.push(line.to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("line {line_no}: expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        let ctx = || format!("line {line_no}: bad value {value:?} for {key}");
        match (&section, key) {
            (Section::Top, "corpus") => cfg.corpus = Some(PathBuf::from(value)),
            (Section::Top, "format") => {
                cfg.format = value.parse().map_err(|e: String| anyhow::anyhow!(e))?
            }
            (Section::Top, "seed") => cfg.seed = value.parse().with_context(ctx)?,
            (Section::Top, "out") => cfg.out = PathBuf::from(value),
            (Section::Pipeline, "top_words") => cfg.top_words = value.parse().with_context(ctx)?,
            (Section::Pipeline, "stopwords") => cfg.stopwords_file = Some(PathBuf::from(value)),
            (Section::Pipeline, "stem_toi") => cfg.stem_toi = value.parse().with_context(ctx)?,
            (Section::Pipeline, "baseline_text") => {
                cfg.baseline_full_text = match value {
                    "sentence" => false,
                    "full" => true,
                    _ => bail!("line {line_no}: baseline_text must be sentence|full"),
                }
            }
            (Section::Toi(i), "aliases") => {
                cfg.tois[*i].aliases = value
                    .split(',')
                    .map(|a| a.trim().to_lowercase())
                    .filter(|a| !a.is_empty())
                    .collect()
            }
            (Section::Svm, "lambda") => cfg.svm_lambda = value.parse().with_context(ctx)?,
            (Section::Svm, "learning_rate") => {
                cfg.svm_learning_rate = value.parse().with_context(ctx)?
            }
            (Section::Svm, "epochs") => cfg.svm_epochs = value.parse().with_context(ctx)?,
            (Section::Mlp, "hidden") => {
                cfg.mlp_hidden = value
                    .split(',')
                    .map(|s| s.trim().parse().with_context(ctx))
                    .collect::<Result<_>>()?
            }
            (Section::Mlp, "learning_rate") => {
                cfg.mlp_learning_rate = value.parse().with_context(ctx)?
            }
            (Section::Mlp, "epochs") => cfg.mlp_epochs = value.parse().with_context(ctx)?,
            (Section::Mlp, "batch_size") => {
                cfg.mlp_batch_size = value.parse().with_context(ctx)?
            }
            (Section::Mlp, "l2") => cfg.mlp_l2 = value.parse().with_context(ctx)?,
            (Section::Eval, "folds") => cfg.folds = value.parse().with_context(ctx)?,
            (Section::Eval, "bootstrap") => cfg.bootstrap = value.parse().with_context(ctx)?,
            (Section::Eval, "level") => cfg.level = value.parse().with_context(ctx)?,
            _ => bail!("line {line_no}: unknown key {key:?} in this section"),
        }
    }
    Ok(cfg)
}
