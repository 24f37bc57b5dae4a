//! Lightweight classifiers producing confidence scores.

mod mlp;
mod svm;

pub use mlp::{grid_search_mlp, mlp_gradient_check, mlp_train, GridSearchResult, Mlp, MlpHyper};
pub use svm::{svm_train, LinearSvm, SvmHyper};
