//! Subcommand implementations wiring the library end to end.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rwov_core::corpus::{
    generate_synthetic, load_corpus, preset, to_csv, to_jsonl, CorpusFormat, CorpusSpec, Document,
    Label, TemplateBank,
};
use rwov_core::eval::{
    compare, eligible_docs, render, Classifier, CompareOutcome, FittedVectorizer, Method,
};
use rwov_core::persist::ModelBundle;
use rwov_core::rwov::fit_transform;
use rwov_core::seed::derive_seed;
use rwov_core::textprep::prepare;

use crate::config::RunConfig;
use crate::io::write_atomic;

pub struct SynthArgs {
    pub preset: String,
    pub n: usize,
    pub noise: f64,
    pub templates: Option<PathBuf>,
    pub toi_overrides: Vec<String>,
    pub file: Option<String>,
}

pub fn cmd_synth(cfg: &RunConfig, args: &SynthArgs) -> Result<()> {
    let prevalence: Vec<(String, f64)> = if args.toi_overrides.is_empty() {
        preset(&args.preset)
            .with_context(|| format!("unknown preset {:?}", args.preset))?
            .into_iter()
            .map(|p| (p.name, p.prevalence))
            .collect()
    } else {
        args.toi_overrides
            .iter()
            .map(|spec| {
                let (name, value) = spec
                    .split_once('=')
                    .with_context(|| format!("--toi wants NAME=FRACTION, got {spec:?}"))?;
                let value: f64 = value
                    .parse()
                    .with_context(|| format!("bad fraction in {spec:?}"))?;
                Ok((name.to_string(), value))
            })
            .collect::<Result<_>>()?
    };
    let bank = match &args.templates {
        Some(path) => TemplateBank::load(path)?,
        None => TemplateBank::builtin(),
    };
    let spec = CorpusSpec {
        n_docs: args.n,
        prevalence: prevalence.clone(),
        noise_rate: args.noise,
        seed: cfg.seed,
    };
    let docs = generate_synthetic(&spec, &bank)?;

    let (contents, default_name) = match cfg.format {
        CorpusFormat::Jsonl => (to_jsonl(&docs), "corpus.jsonl"),
        CorpusFormat::Csv => {
            let columns: Vec<String> = prevalence.iter().map(|(t, _)| t.clone()).collect();
            (to_csv(&docs, &columns), "corpus.csv")
        }
    };
    let path = cfg
        .out
        .join(args.file.as_deref().unwrap_or(default_name));
    write_atomic(&path, &contents)?;

    println!("wrote {} documents to {}", docs.len(), path.display());
    for (toi, target) in &prevalence {
        let positives = docs
            .iter()
            .filter(|d| d.label(toi) == Label::Positive)
            .count();
        println!(
            "  {toi}: {positives}/{} positive (realized {:.3}, target {target:.3})",
            docs.len(),
            positives as f64 / docs.len() as f64
        );
    }
    Ok(())
}

fn load_run_corpus(cfg: &RunConfig) -> Result<Vec<Document>> {
    let path = cfg
        .corpus
        .as_ref()
        .context("no corpus file given (use --corpus or the config)")?;
    Ok(load_corpus(path, cfg.format)?)
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect::<String>()
        .trim_matches('-')
        .to_string()
}

pub fn cmd_vectorize(cfg: &RunConfig) -> Result<()> {
    let docs = load_run_corpus(cfg)?;
    for toi in cfg.toi_specs()? {
        let prepared: Vec<_> = docs.iter().filter_map(|d| prepare(d, &toi.pipeline)).collect();
        let excluded = docs.len() - prepared.len();
        if prepared.is_empty() {
            return Err(rwov_core::Error::EmptyInput {
                what: format!("no document contains the TOI {:?}", toi.name),
            }
            .into());
        }
        let (top, matrix) = fit_transform::<f64>(&prepared, cfg.top_words)?;
        let slug = sanitize(&toi.name);
        let top_path = cfg.out.join(format!("topwords_{slug}.tsv"));
        let matrix_path = cfg.out.join(format!("matrix_{slug}.csv"));
        write_atomic(&top_path, &top.to_tsv())?;
        write_atomic(&matrix_path, &matrix.to_csv())?;
        println!(
            "{}: {} rows x {} words -> {}, {} ({} documents without the TOI excluded)",
            toi.name,
            matrix.n_rows(),
            matrix.n_cols(),
            top_path.display(),
            matrix_path.display(),
            excluded
        );
    }
    Ok(())
}

pub fn cmd_train(
    cfg: &RunConfig,
    method_id: &str,
    toi_name: &str,
    class: &str,
    model_out: Option<&Path>,
) -> Result<()> {
    let method = Method::parse(method_id)?;
    let positive = match class {
        "pos" => Label::Positive,
        "neg" => Label::Negative,
        other => bail!("--class must be pos or neg, got {other:?}"),
    };
    let docs = load_run_corpus(cfg)?;
    let toi = cfg
        .toi_specs()?
        .into_iter()
        .find(|t| t.name.eq_ignore_ascii_case(toi_name))
        .with_context(|| format!("TOI {toi_name:?} is not configured"))?;

    let opts = cfg.crossval_options();
    let data = eligible_docs(&docs, &toi, opts.baseline_full_text);
    if data.prepared.is_empty() {
        return Err(rwov_core::Error::EmptyInput {
            what: format!("no eligible document contains the TOI {:?}", toi.name),
        }
        .into());
    }
    let vectorizer = FittedVectorizer::fit(
        &method,
        &data.prepared,
        &data.baseline_tokens,
        opts.n_top_words,
    )?;
    let x: Vec<Vec<f64>> = vectorizer.transform(&data.prepared, &data.baseline_tokens);
    let targets: Vec<bool> = data.labels.iter().map(|&l| l == positive).collect();
    let seed = derive_seed(cfg.seed, &format!("train/{method}/{}/{class}", toi.name));
    let classifier = Classifier::train(method.classifier(), &x, &targets, &opts.hypers, seed)?;

    let bundle = ModelBundle {
        method,
        toi_name: toi.name.clone(),
        pipeline: toi.pipeline.clone(),
        positive,
        baseline_full_text: opts.baseline_full_text,
        vectorizer,
        classifier,
    };
    let path = match model_out {
        Some(p) => p.to_path_buf(),
        None => cfg.out.join(format!(
            "model_{}_{}_{class}.txt",
            sanitize(&method.to_string()),
            sanitize(&toi.name)
        )),
    };
    write_atomic(&path, &bundle.to_text())?;
    println!(
        "trained {method} on {} eligible documents ({} excluded without TOI, {} unknown label) -> {}",
        data.prepared.len(),
        data.excluded_not_found,
        data.excluded_unknown,
        path.display()
    );
    Ok(())
}

pub fn cmd_predict(cfg: &RunConfig, model_path: &Path, out_file: Option<&Path>) -> Result<()> {
    let raw = std::fs::read_to_string(model_path)
        .with_context(|| format!("reading model {}", model_path.display()))?;
    let bundle = ModelBundle::<f64>::from_text(&raw)?;
    let docs = load_run_corpus(cfg)?;

    let mut csv = String::from("doc_id,score,predicted_class,flag\n");
    let mut flagged = 0usize;
    for doc in &docs {
        match bundle.score_document(doc)? {
            Some((score, predicted)) => {
                let label = bundle.predicted_label(predicted);
                csv.push_str(&format!("{},{score:.16e},{label},\n", doc.id));
            }
            None => {
                flagged += 1;
                csv.push_str(&format!("{},,,toi_not_found\n", doc.id));
            }
        }
    }
    let path = match out_file {
        Some(p) => p.to_path_buf(),
        None => cfg.out.join("predictions.csv"),
    };
    write_atomic(&path, &csv)?;
    println!(
        "scored {} documents with {} ({} flagged without the TOI) -> {}",
        docs.len(),
        bundle.method,
        flagged,
        path.display()
    );
    Ok(())
}

fn run_comparison(cfg: &RunConfig, method_ids: &[String], prefix: &str) -> Result<()> {
    let docs = load_run_corpus(cfg)?;
    let tois = cfg.toi_specs()?;
    let opts = cfg.crossval_options();
    let outcome: CompareOutcome<f64> = compare(method_ids, &docs, &tois, &opts)?;
    let rendered = render(&outcome);

    let out = &cfg.out;
    write_atomic(&out.join(format!("{prefix}report.csv")), &rendered.table_csv)?;
    write_atomic(&out.join(format!("{prefix}report.txt")), &rendered.table_txt)?;
    write_atomic(&out.join(format!("{prefix}ci.csv")), &rendered.ci_csv)?;
    write_atomic(&out.join(format!("{prefix}roc.csv")), &rendered.roc_csv)?;
    write_atomic(&out.join(format!("{prefix}folds.csv")), &rendered.folds_csv)?;
    print!("{}", rendered.table_txt);
    println!(
        "reports written to {}",
        out.join(format!("{prefix}report.csv")).display()
    );

    let failed = outcome.failed_methods();
    if !failed.is_empty() {
        bail!("methods failed: {}", failed.join(", "));
    }
    Ok(())
}

pub fn cmd_crossval(cfg: &RunConfig, method_id: &str) -> Result<()> {
    run_comparison(cfg, &[method_id.to_string()], "crossval_")
}

pub fn cmd_compare(cfg: &RunConfig, methods_flag: Option<&str>) -> Result<()> {
    let methods: Vec<String> = match methods_flag {
        Some(list) => split_method_list(list),
        None => cfg.methods.clone(),
    };
    if methods.is_empty() {
        bail!("no methods given (use --methods or a [methods] config section)");
    }
    run_comparison(cfg, &methods, "")
}

/// Split a method list on commas outside parentheses, so ids like
/// `svm(1,2)` stay whole.
fn split_method_list(list: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for c in list.chars() {
        match c {
            '(' => {
                depth += 1;
                current.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            ',' if depth == 0 => {
                let id = current.trim().to_string();
                if !id.is_empty() {
                    out.push(id);
                }
                current.clear();
            }
            _ => current.push(c),
        }
    }
    let id = current.trim().to_string();
    if !id.is_empty() {
        out.push(id);
    }
    out
}
