//! Stratified cross-validation driver: shared fold partitions, per-class
//! models, pooled predictions for CIs and ROC data.

use crate::corpus::{Document, Label};
use crate::error::{Error, Result};
use crate::eval::bootstrap::{bootstrap_ci, point_estimate, BootstrapMetric, Triple};
use crate::eval::folds::stratified_kfold;
use crate::eval::method::{Classifier, FittedVectorizer, Method, ModelHypers};
use crate::eval::metrics::{auc, f1, precision, recall, roc_curve, ConfusionCounts};
use crate::scalar::Scalar;
use crate::seed::derive_seed;
use crate::textprep::{prepare, prepare_full_text, PipelineConfig, PreparedDoc};

/// A TOI under evaluation: the label key plus its pipeline settings.
#[derive(Debug, Clone)]
pub struct ToiSpec {
    pub name: String,
    pub pipeline: PipelineConfig,
}

#[derive(Debug, Clone)]
pub struct CrossvalOptions<F> {
    pub n_top_words: usize,
    pub folds: usize,
    /// Bootstrap replicates per confidence interval.
    pub bootstrap: usize,
    pub level: f64,
    pub seed: u64,
    pub hypers: ModelHypers<F>,
    /// Feed baselines the whole document instead of the TOI sentence.
    pub baseline_full_text: bool,
}

impl<F: Scalar> Default for CrossvalOptions<F> {
    fn default() -> Self {
        CrossvalOptions {
            n_top_words: 20,
            folds: 3,
            bootstrap: 1000,
            level: 0.95,
            seed: 7,
            hypers: ModelHypers::default(),
            baseline_full_text: false,
        }
    }
}

/// Documents that survive per-TOI exclusion, with the token view each
/// vectorizer consumes.
#[derive(Debug, Clone)]
pub struct EligibleDocs {
    pub prepared: Vec<PreparedDoc>,
    pub baseline_tokens: Vec<Vec<String>>,
    pub labels: Vec<Label>,
    pub excluded_not_found: usize,
    pub excluded_unknown: usize,
}

/// Drop documents with an unknown label or no TOI sentence, mirroring the
/// restriction to reports that carry a determination.
pub fn eligible_docs(docs: &[Document], toi: &ToiSpec, baseline_full_text: bool) -> EligibleDocs {
    let mut out = EligibleDocs {
        prepared: Vec::new(),
        baseline_tokens: Vec::new(),
        labels: Vec::new(),
        excluded_not_found: 0,
        excluded_unknown: 0,
    };
    for doc in docs {
        let label = doc.label(&toi.name);
        if label == Label::Unknown {
            out.excluded_unknown += 1;
            continue;
        }
        match prepare(doc, &toi.pipeline) {
            Some(prepared) => {
                let baseline = if baseline_full_text {
                    prepare_full_text(doc, &toi.pipeline)
                } else {
                    prepared.tokens.clone()
                };
                out.prepared.push(prepared);
                out.baseline_tokens.push(baseline);
                out.labels.push(label);
            }
            None => out.excluded_not_found += 1,
        }
    }
    out
}

/// The fold partition for one TOI. Methods never enter the stream name, so
/// every method compared in a run shares the same split.
pub fn fold_partition(
    labels: &[Label],
    toi_name: &str,
    folds: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    let positive: Vec<bool> = labels.iter().map(|&l| l == Label::Positive).collect();
    stratified_kfold(&positive, folds, derive_seed(seed, &format!("split/{toi_name}")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMetrics<F> {
    pub f1: F,
    pub precision: F,
    pub recall: F,
    pub auc: F,
}

#[derive(Debug, Clone)]
pub struct ClassReport<F> {
    /// e.g. "ER+" or "ER-".
    pub class: String,
    pub folds: Vec<FoldMetrics<F>>,
    /// Fold-averaged headline metrics.
    pub f1: F,
    pub precision: F,
    pub recall: F,
    pub auc: F,
    /// Metrics recomputed on predictions pooled across folds; the CIs
    /// bootstrap these.
    pub pooled_f1: F,
    pub pooled_auc: F,
    pub ci_f1: (F, F),
    pub ci_auc: (F, F),
    pub roc: Vec<(F, F)>,
}

#[derive(Debug, Clone)]
pub struct MethodReport<F> {
    pub method: Method,
    pub toi: String,
    pub excluded_not_found: usize,
    pub excluded_unknown: usize,
    pub fold_sizes: Vec<usize>,
    /// Positive-class report first, then negative-class.
    pub classes: Vec<ClassReport<F>>,
}

/// Evaluate one method on one TOI under threefold-style stratified CV.
pub fn crossval<F: Scalar>(
    method: &Method,
    docs: &[Document],
    toi: &ToiSpec,
    opts: &CrossvalOptions<F>,
) -> Result<MethodReport<F>> {
    let data = eligible_docs(docs, toi, opts.baseline_full_text);
    ensure_both_classes(&data, &toi.name)?;
    let partition = fold_partition(&data.labels, &toi.name, opts.folds, opts.seed)?;
    crossval_with_partition(method, &data, &partition, &toi.name, opts)
}

fn ensure_both_classes(data: &EligibleDocs, toi_name: &str) -> Result<()> {
    if data.prepared.is_empty() {
        return Err(Error::EmptyInput {
            what: format!("no eligible document contains the TOI {toi_name:?}"),
        });
    }
    let n_pos = data.labels.iter().filter(|&&l| l == Label::Positive).count();
    if n_pos == 0 || n_pos == data.labels.len() {
        return Err(Error::SingleClassInput);
    }
    Ok(())
}

/// As [`crossval`], with the fold partition supplied by the caller so a
/// comparison run can reuse one split across every method.
pub fn crossval_with_partition<F: Scalar>(
    method: &Method,
    data: &EligibleDocs,
    partition: &[Vec<usize>],
    toi_name: &str,
    opts: &CrossvalOptions<F>,
) -> Result<MethodReport<F>> {
    let mut classes = Vec::with_capacity(2);
    for (positive_label, tag, sign) in
        [(Label::Positive, "pos", "+"), (Label::Negative, "neg", "-")]
    {
        let targets: Vec<bool> = data.labels.iter().map(|&l| l == positive_label).collect();
        let (folds, triples) =
            run_partition(data, partition, &targets, |fold, train_idx, test_idx| {
                let train_prepared: Vec<PreparedDoc> =
                    train_idx.iter().map(|&i| data.prepared[i].clone()).collect();
                let train_baseline: Vec<Vec<String>> = train_idx
                    .iter()
                    .map(|&i| data.baseline_tokens[i].clone())
                    .collect();
                let vectorizer = FittedVectorizer::fit(
                    method,
                    &train_prepared,
                    &train_baseline,
                    opts.n_top_words,
                )?;
                let train_x: Vec<Vec<F>> = vectorizer.transform(&train_prepared, &train_baseline);
                let train_y: Vec<bool> = train_idx.iter().map(|&i| targets[i]).collect();
                let seed = derive_seed(
                    opts.seed,
                    &format!("init/{method}/{toi_name}/{tag}/{fold}"),
                );
                let model = Classifier::train(
                    method.classifier(),
                    &train_x,
                    &train_y,
                    &opts.hypers,
                    seed,
                )?;
                let test_prepared: Vec<PreparedDoc> =
                    test_idx.iter().map(|&i| data.prepared[i].clone()).collect();
                let test_baseline: Vec<Vec<String>> = test_idx
                    .iter()
                    .map(|&i| data.baseline_tokens[i].clone())
                    .collect();
                let test_x: Vec<Vec<F>> = vectorizer.transform(&test_prepared, &test_baseline);
                test_x
                    .iter()
                    .map(|x| Ok((model.score(x)?, model.predict(x)?)))
                    .collect()
            })?;

        let mean = |pick: &dyn Fn(&FoldMetrics<F>) -> F| {
            folds.iter().map(|m| pick(m)).fold(F::zero(), |a, v| a + v)
                / F::from_usize_lossy(folds.len())
        };
        let ci_seed = derive_seed(opts.seed, &format!("bootstrap/{method}/{toi_name}/{tag}"));
        let scores: Vec<F> = triples.iter().map(|t| t.score).collect();
        let labels: Vec<bool> = triples.iter().map(|t| t.label).collect();
        classes.push(ClassReport {
            class: format!("{toi_name}{sign}"),
            f1: mean(&|m| m.f1),
            precision: mean(&|m| m.precision),
            recall: mean(&|m| m.recall),
            auc: mean(&|m| m.auc),
            folds,
            pooled_f1: point_estimate(&triples, BootstrapMetric::F1),
            pooled_auc: point_estimate(&triples, BootstrapMetric::Auc),
            ci_f1: bootstrap_ci(&triples, BootstrapMetric::F1, opts.bootstrap, opts.level, ci_seed)?,
            ci_auc: bootstrap_ci(
                &triples,
                BootstrapMetric::Auc,
                opts.bootstrap,
                opts.level,
                ci_seed,
            )?,
            roc: roc_curve(&scores, &labels)?,
        });
    }
    Ok(MethodReport {
        method: *method,
        toi: toi_name.to_string(),
        excluded_not_found: data.excluded_not_found,
        excluded_unknown: data.excluded_unknown,
        fold_sizes: partition.iter().map(Vec::len).collect(),
        classes,
    })
}

/// Shared fold loop: the closure trains on the train indices and returns
/// (score, prediction) per test index, in test-index order.
fn run_partition<F: Scalar>(
    data: &EligibleDocs,
    partition: &[Vec<usize>],
    targets: &[bool],
    fit_and_score: impl Fn(usize, &[usize], &[usize]) -> Result<Vec<(F, bool)>>,
) -> Result<(Vec<FoldMetrics<F>>, Vec<Triple<F>>)> {
    let n = data.prepared.len();
    let mut fold_metrics = Vec::with_capacity(partition.len());
    let mut triples = Vec::with_capacity(n);
    for (fold, test_idx) in partition.iter().enumerate() {
        let train_idx: Vec<usize> = (0..n).filter(|i| !test_idx.contains(i)).collect();
        let scored = fit_and_score(fold, &train_idx, test_idx)?;
        debug_assert_eq!(scored.len(), test_idx.len());

        let mut counts = ConfusionCounts::default();
        let mut scores = Vec::with_capacity(test_idx.len());
        let mut labels = Vec::with_capacity(test_idx.len());
        for (&i, &(score, predicted)) in test_idx.iter().zip(&scored) {
            counts.record(predicted, targets[i]);
            scores.push(score);
            labels.push(targets[i]);
            triples.push(Triple {
                score,
                label: targets[i],
                predicted,
            });
        }
        fold_metrics.push(FoldMetrics {
            f1: f1(&counts),
            precision: precision(&counts),
            recall: recall(&counts),
            auc: auc(&scores, &labels)?,
        });
    }
    Ok((fold_metrics, triples))
}

/// One comparison run: every method evaluated on every TOI under the same
/// per-TOI fold partition. Method-level failures are recorded, not fatal.
#[derive(Debug, Clone)]
pub struct CompareOutcome<F> {
    /// Method ids as given in the run configuration.
    pub method_ids: Vec<String>,
    /// Per method: one report per TOI, or the error that stopped it.
    pub results: Vec<std::result::Result<Vec<MethodReport<F>>, String>>,
}

impl<F> CompareOutcome<F> {
    pub fn failed_methods(&self) -> Vec<&str> {
        self.method_ids
            .iter()
            .zip(&self.results)
            .filter(|(_, r)| r.is_err())
            .map(|(id, _)| id.as_str())
            .collect()
    }
}

/// Run the full method grid. Corpus-level problems (a TOI with no eligible
/// documents or a single class) abort the run; per-method problems mark
/// that method FAILED and the others complete.
pub fn compare<F: Scalar>(
    method_ids: &[String],
    docs: &[Document],
    tois: &[ToiSpec],
    opts: &CrossvalOptions<F>,
) -> Result<CompareOutcome<F>> {
    if method_ids.is_empty() {
        return Err(Error::EmptyInput {
            what: "method list".into(),
        });
    }
    if tois.is_empty() {
        return Err(Error::EmptyInput {
            what: "toi list".into(),
        });
    }
    let mut per_toi = Vec::with_capacity(tois.len());
    for toi in tois {
        let data = eligible_docs(docs, toi, opts.baseline_full_text);
        ensure_both_classes(&data, &toi.name)?;
        let partition = fold_partition(&data.labels, &toi.name, opts.folds, opts.seed)?;
        per_toi.push((toi, data, partition));
    }

    let mut results = Vec::with_capacity(method_ids.len());
    for id in method_ids {
        let run = || -> Result<Vec<MethodReport<F>>> {
            let method = Method::parse(id)?;
            per_toi
                .iter()
                .map(|(toi, data, partition)| {
                    crossval_with_partition(&method, data, partition, &toi.name, opts)
                })
                .collect()
        };
        results.push(run().map_err(|e| e.to_string()));
    }
    Ok(CompareOutcome {
        method_ids: method_ids.to_vec(),
        results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{generate_synthetic, CorpusSpec, TemplateBank};

    fn toy_corpus(n: usize, prevalence: f64, seed: u64) -> Vec<Document> {
        generate_synthetic(
            &CorpusSpec {
                n_docs: n,
                prevalence: vec![("ER".into(), prevalence)],
                noise_rate: 0.0,
                seed,
            },
            &TemplateBank::builtin(),
        )
        .unwrap()
    }

    fn er_spec() -> ToiSpec {
        ToiSpec {
            name: "ER".into(),
            pipeline: PipelineConfig::new("er", &["estrogen receptor".to_string()]).unwrap(),
        }
    }

    fn small_opts() -> CrossvalOptions<f64> {
        CrossvalOptions {
            bootstrap: 100,
            ..CrossvalOptions::default()
        }
    }

    #[test]
    fn majority_method_has_zero_minority_f1() {
        let docs = toy_corpus(40, 0.9, 3);
        let data = eligible_docs(&docs, &er_spec(), false);
        let partition = fold_partition(&data.labels, "ER", 3, 7).unwrap();
        // Always predict "not positive" with a constant score.
        let targets: Vec<bool> = data.labels.iter().map(|&l| l == Label::Negative).collect();
        let (folds, _) = run_partition::<f64>(&data, &partition, &targets, |_, _, test| {
            Ok(test.iter().map(|_| (0.0, false)).collect())
        })
        .unwrap();
        for fold in folds {
            assert_eq!(fold.f1, 0.0);
        }
    }

    #[test]
    fn oracle_scores_give_perfect_metrics() {
        let docs = toy_corpus(30, 0.5, 4);
        let data = eligible_docs(&docs, &er_spec(), false);
        let partition = fold_partition(&data.labels, "ER", 3, 7).unwrap();
        let targets: Vec<bool> = data.labels.iter().map(|&l| l == Label::Positive).collect();
        let (folds, triples) = run_partition::<f64>(&data, &partition, &targets, |_, _, test| {
            Ok(test
                .iter()
                .map(|&i| (if targets[i] { 1.0 } else { 0.0 }, targets[i]))
                .collect())
        })
        .unwrap();
        for fold in folds {
            assert_eq!(fold.f1, 1.0);
            assert_eq!(fold.auc, 1.0);
        }
        assert_eq!(point_estimate(&triples, BootstrapMetric::F1), 1.0);
    }

    #[test]
    fn compare_shares_one_partition_across_methods() {
        let docs = toy_corpus(36, 0.5, 9);
        let opts = CrossvalOptions {
            bootstrap: 100,
            hypers: ModelHypers {
                mlp: crate::models::MlpHyper {
                    epochs: 30,
                    ..Default::default()
                },
                ..Default::default()
            },
            ..CrossvalOptions::default()
        };
        let outcome = compare::<f64>(
            &["rwov-svm".to_string(), "svm(1,1)".to_string()],
            &docs,
            &[er_spec()],
            &opts,
        )
        .unwrap();
        let a = outcome.results[0].as_ref().unwrap();
        let b = outcome.results[1].as_ref().unwrap();
        assert_eq!(a[0].fold_sizes, b[0].fold_sizes);
        // Same seed, same toi -> identical partition by construction.
        let p1 = fold_partition(&eligible_docs(&docs, &er_spec(), false).labels, "ER", 3, opts.seed)
            .unwrap();
        let p2 = fold_partition(&eligible_docs(&docs, &er_spec(), false).labels, "ER", 3, opts.seed)
            .unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn broken_method_id_is_recorded_not_fatal() {
        let docs = toy_corpus(30, 0.5, 5);
        let outcome = compare::<f64>(
            &["rwov-svm".to_string(), "bogus(9)".to_string()],
            &docs,
            &[er_spec()],
            &small_opts(),
        )
        .unwrap();
        assert!(outcome.results[0].is_ok());
        assert!(outcome.results[1].is_err());
        assert_eq!(outcome.failed_methods(), vec!["bogus(9)"]);
    }

    #[test]
    fn toi_without_documents_is_a_corpus_level_error() {
        let docs = toy_corpus(20, 0.5, 6);
        let missing = ToiSpec {
            name: "KRAS".into(),
            pipeline: PipelineConfig::new("kras", &[]).unwrap(),
        };
        let err = compare::<f64>(
            &["rwov-svm".to_string()],
            &docs,
            &[missing],
            &small_opts(),
        );
        match err {
            Err(Error::EmptyInput { what }) => assert!(what.contains("KRAS")),
            other => panic!("expected EmptyInput naming the TOI, got {other:?}"),
        }
    }

    #[test]
    fn unknown_labels_are_excluded_and_counted() {
        let mut docs = toy_corpus(30, 0.5, 8);
        docs[0].labels.insert("ER".into(), Label::Unknown);
        docs[1].labels.insert("ER".into(), Label::Unknown);
        let data = eligible_docs(&docs, &er_spec(), false);
        assert_eq!(data.excluded_unknown, 2);
        assert_eq!(data.prepared.len(), 28);
    }
}
