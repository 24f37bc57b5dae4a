//! Evaluation protocol: per-class confusion metrics, exact AUC, stratified
//! cross-validation, percentile bootstrap CIs, comparison reports.

mod bootstrap;
mod crossval;
mod folds;
mod method;
mod metrics;
mod report;

pub use bootstrap::{bootstrap_ci, point_estimate, BootstrapMetric, Triple};
pub use crossval::{
    compare, crossval, crossval_with_partition, eligible_docs, fold_partition, ClassReport,
    CompareOutcome, CrossvalOptions, EligibleDocs, FoldMetrics, MethodReport, ToiSpec,
};
pub use folds::stratified_kfold;
pub use method::{Classifier, ClassifierKind, FittedVectorizer, Method, ModelHypers};
pub use metrics::{auc, f1, f1_flagged, precision, recall, roc_curve, trapezoid, ConfusionCounts};
pub use report::{render, RenderedReports};
