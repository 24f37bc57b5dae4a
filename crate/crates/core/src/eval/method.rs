//! Method descriptors: which vectorizer feeds which classifier.

use std::fmt;

use crate::baselines::{idf_weight, ngram_fit, ngram_transform, NGramVocabulary};
use crate::error::{Error, Result};
use crate::models::{mlp_train, svm_train, LinearSvm, Mlp, MlpHyper, SvmHyper};
use crate::rwov::{select_top_words, vectorize_doc, TopWords};
use crate::scalar::Scalar;
use crate::textprep::PreparedDoc;

/// One experiment arm, named the way the comparison table labels rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    RwovNn,
    RwovSvm,
    NgramSvm(usize, usize),
    NgramNn(usize, usize),
}

impl Method {
    /// Parse ids like `rwov-nn`, `svm(1,2)`, `nn(3,3)` (case-insensitive).
    pub fn parse(id: &str) -> Result<Method> {
        let unknown = || Error::UnknownMethod { id: id.to_string() };
        let s = id.trim().to_ascii_lowercase();
        match s.as_str() {
            "rwov-nn" => return Ok(Method::RwovNn),
            "rwov-svm" => return Ok(Method::RwovSvm),
            _ => {}
        }
        let (kind, rest) = if let Some(rest) = s.strip_prefix("svm(") {
            ("svm", rest)
        } else if let Some(rest) = s.strip_prefix("nn(") {
            ("nn", rest)
        } else {
            return Err(unknown());
        };
        let body = rest.strip_suffix(')').ok_or_else(unknown)?;
        let (lo, hi) = body.split_once(',').ok_or_else(unknown)?;
        let lo: usize = lo.trim().parse().map_err(|_| unknown())?;
        let hi: usize = hi.trim().parse().map_err(|_| unknown())?;
        if lo < 1 || hi < lo {
            return Err(Error::InvalidRange { lo, hi });
        }
        Ok(match kind {
            "svm" => Method::NgramSvm(lo, hi),
            _ => Method::NgramNn(lo, hi),
        })
    }

    pub fn uses_rwov(&self) -> bool {
        matches!(self, Method::RwovNn | Method::RwovSvm)
    }

    pub fn classifier(&self) -> ClassifierKind {
        match self {
            Method::RwovNn | Method::NgramNn(..) => ClassifierKind::Nn,
            Method::RwovSvm | Method::NgramSvm(..) => ClassifierKind::Svm,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::RwovNn => write!(f, "RWOV-NN"),
            Method::RwovSvm => write!(f, "RWOV-SVM"),
            Method::NgramSvm(lo, hi) => write!(f, "SVM({lo},{hi})"),
            Method::NgramNn(lo, hi) => write!(f, "NN({lo},{hi})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierKind {
    Svm,
    Nn,
}

/// A vocabulary frozen on training data.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedVectorizer {
    Rwov(TopWords),
    Ngram(NGramVocabulary),
}

impl FittedVectorizer {
    /// Fit on the training split. `prepared` drives the word-order arm;
    /// `baseline_tokens` (same length/order) drives the n-gram arm.
    pub fn fit(
        method: &Method,
        prepared: &[PreparedDoc],
        baseline_tokens: &[Vec<String>],
        n_top_words: usize,
    ) -> Result<FittedVectorizer> {
        match method {
            Method::RwovNn | Method::RwovSvm => Ok(FittedVectorizer::Rwov(select_top_words(
                prepared,
                n_top_words,
            )?)),
            Method::NgramSvm(lo, hi) | Method::NgramNn(lo, hi) => Ok(FittedVectorizer::Ngram(
                ngram_fit(baseline_tokens, (*lo, *hi))?,
            )),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FittedVectorizer::Rwov(top) => top.len(),
            FittedVectorizer::Ngram(vocab) => vocab.len(),
        }
    }

    pub fn transform<F: Scalar>(
        &self,
        prepared: &[PreparedDoc],
        baseline_tokens: &[Vec<String>],
    ) -> Vec<Vec<F>> {
        match self {
            FittedVectorizer::Rwov(top) => {
                prepared.iter().map(|d| vectorize_doc(d, top)).collect()
            }
            FittedVectorizer::Ngram(vocab) => {
                idf_weight(&ngram_transform(baseline_tokens, vocab), vocab)
            }
        }
    }
}

/// A trained scoring model for one (method, TOI, class) arm.
#[derive(Debug, Clone, PartialEq)]
pub enum Classifier<F> {
    Svm(LinearSvm<F>),
    Mlp(Mlp<F>),
}

/// Hyperparameters for both classifier arms; per-fold seeds are injected
/// by the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelHypers<F> {
    pub svm: SvmHyper<F>,
    pub mlp: MlpHyper<F>,
    /// Hidden layout for the network arm.
    pub hidden: Vec<usize>,
}

impl<F: Scalar> Default for ModelHypers<F> {
    fn default() -> Self {
        ModelHypers {
            svm: SvmHyper::default(),
            mlp: MlpHyper::default(),
            hidden: vec![16],
        }
    }
}

impl<F: Scalar> Classifier<F> {
    pub fn train(
        kind: ClassifierKind,
        x: &[Vec<F>],
        targets: &[bool],
        hypers: &ModelHypers<F>,
        seed: u64,
    ) -> Result<Classifier<F>> {
        match kind {
            ClassifierKind::Svm => {
                let y: Vec<i8> = targets.iter().map(|&t| if t { 1 } else { -1 }).collect();
                let hyper = SvmHyper {
                    seed,
                    ..hypers.svm.clone()
                };
                Ok(Classifier::Svm(svm_train(x, &y, hyper)?))
            }
            ClassifierKind::Nn => {
                let y: Vec<u8> = targets.iter().map(|&t| u8::from(t)).collect();
                let dim = x.first().map(Vec::len).unwrap_or(0);
                let mut layer_sizes = Vec::with_capacity(hypers.hidden.len() + 2);
                layer_sizes.push(dim);
                layer_sizes.extend_from_slice(&hypers.hidden);
                layer_sizes.push(1);
                let hyper = MlpHyper {
                    seed,
                    ..hypers.mlp.clone()
                };
                Ok(Classifier::Mlp(mlp_train(x, &y, &layer_sizes, hyper)?))
            }
        }
    }

    /// Confidence score: SVM margin or network probability.
    pub fn score(&self, x: &[F]) -> Result<F> {
        match self {
            Classifier::Svm(m) => m.score(x),
            Classifier::Mlp(m) => m.predict_proba(x),
        }
    }

    pub fn predict(&self, x: &[F]) -> Result<bool> {
        match self {
            Classifier::Svm(m) => Ok(m.predict(x)? > 0),
            Classifier::Mlp(m) => m.predict(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_table_style_ids() {
        assert_eq!(Method::parse("rwov-nn").unwrap(), Method::RwovNn);
        assert_eq!(Method::parse("RWOV-SVM").unwrap(), Method::RwovSvm);
        assert_eq!(Method::parse("svm(1,2)").unwrap(), Method::NgramSvm(1, 2));
        assert_eq!(Method::parse("NN(3,3)").unwrap(), Method::NgramNn(3, 3));
        assert!(matches!(
            Method::parse("word2vec"),
            Err(Error::UnknownMethod { .. })
        ));
        assert!(matches!(
            Method::parse("svm(2,1)"),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn display_matches_table_labels() {
        assert_eq!(Method::RwovNn.to_string(), "RWOV-NN");
        assert_eq!(Method::NgramSvm(1, 2).to_string(), "SVM(1,2)");
        assert_eq!(Method::NgramNn(2, 3).to_string(), "NN(2,3)");
    }
}
