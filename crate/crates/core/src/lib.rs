//! Word-order feature vectorization and desk-scale evaluation for
//! semi-structured clinical text.
//!
//! The pipeline runs corpus -> textprep -> vectorizers (word-order or
//! n-gram+IDF) -> classifiers (linear SVM, small MLP) -> evaluation
//! (per-class F1/AUC, stratified cross-validation, bootstrap CIs).
//! Numeric layers are generic over [`scalar::Scalar`] (`f32`/`f64`);
//! concrete `f64` aliases are exported below.

pub mod baselines;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod models;
pub mod persist;
pub mod rwov;
pub mod scalar;
pub mod seed;
pub mod textprep;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type FeatureMatrix32 = rwov::FeatureMatrix<f32>;
pub type FeatureMatrix64 = rwov::FeatureMatrix<f64>;
pub type LinearSvm32 = models::LinearSvm<f32>;
pub type LinearSvm64 = models::LinearSvm<f64>;
pub type Mlp32 = models::Mlp<f32>;
pub type Mlp64 = models::Mlp<f64>;
