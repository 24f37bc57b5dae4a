//! Model persistence: one self-describing text file bundling the pipeline
//! settings, the fitted vocabulary and the classifier weights.
//!
//! Floats are printed with 17 significant digits so loading an export
//! reproduces the model exactly. Loaders reject unknown versions.

use std::collections::BTreeSet;

use crate::baselines::NGramVocabulary;
use crate::corpus::{Document, Label};
use crate::error::{Error, Result};
use crate::eval::{Classifier, FittedVectorizer, Method};
use crate::models::{LinearSvm, Mlp, MlpHyper, SvmHyper};
use crate::rwov::TopWords;
use crate::scalar::Scalar;
use crate::textprep::{prepare, prepare_full_text, PipelineConfig};

pub const MODEL_VERSION: &str = "rwov-model v1";

/// Everything needed to score new documents for one (method, TOI, class).
#[derive(Debug, Clone)]
pub struct ModelBundle<F> {
    pub method: Method,
    pub toi_name: String,
    pub pipeline: PipelineConfig,
    /// The label scored as the positive class.
    pub positive: Label,
    pub baseline_full_text: bool,
    pub vectorizer: FittedVectorizer,
    pub classifier: Classifier<F>,
}

impl<F: Scalar> ModelBundle<F> {
    /// Score one document. `None` when no sentence contains the TOI.
    pub fn score_document(&self, doc: &Document) -> Result<Option<(F, bool)>> {
        let Some(prepared) = prepare(doc, &self.pipeline) else {
            return Ok(None);
        };
        let baseline = if self.baseline_full_text {
            prepare_full_text(doc, &self.pipeline)
        } else {
            prepared.tokens.clone()
        };
        let x = &self.vectorizer.transform::<F>(&[prepared], &[baseline])[0];
        Ok(Some((self.classifier.score(x)?, self.classifier.predict(x)?)))
    }

    /// Map a thresholded prediction back to a document label.
    pub fn predicted_label(&self, predicted: bool) -> Label {
        if predicted {
            self.positive
        } else {
            self.positive.flipped()
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(MODEL_VERSION);
        out.push('\n');
        out.push_str(&format!("method = {}\n", self.method.to_string().to_lowercase()));
        out.push_str(&format!("toi = {}\n", self.toi_name));
        out.push_str(&format!("toi_token = {}\n", self.pipeline.toi()));
        out.push_str(&format!("aliases = {}\n", self.pipeline.aliases().join("|")));
        out.push_str(&format!("stem_toi = {}\n", self.pipeline.stem_toi()));
        out.push_str(&format!("positive = {}\n", self.positive));
        out.push_str(&format!(
            "baseline_text = {}\n",
            if self.baseline_full_text { "full" } else { "sentence" }
        ));
        let stopwords: Vec<&str> = self.pipeline.stopwords().iter().map(String::as_str).collect();
        out.push_str(&format!("stopwords = {}\n", stopwords.join(" ")));
        match &self.vectorizer {
            FittedVectorizer::Rwov(top) => {
                out.push_str("vectorizer = rwov\n[vocabulary]\n");
                out.push_str(&top.to_tsv());
            }
            FittedVectorizer::Ngram(vocab) => {
                let (lo, hi) = vocab.range();
                out.push_str(&format!("vectorizer = ngram {lo} {hi}\n[vocabulary]\n"));
                out.push_str(&vocab.to_tsv());
            }
        }
        match &self.classifier {
            Classifier::Svm(svm) => {
                out.push_str("[svm]\n");
                out.push_str(&format!("lambda = {:.16e}\n", svm.hyper.lambda));
                out.push_str(&format!("learning_rate = {:.16e}\n", svm.hyper.learning_rate));
                out.push_str(&format!("epochs = {}\n", svm.hyper.epochs));
                out.push_str(&format!("seed = {}\n", svm.hyper.seed));
                out.push_str(&format!(
                    "class_weights = {:.16e} {:.16e}\n",
                    svm.class_weights.0, svm.class_weights.1
                ));
                out.push_str(&format!("bias = {:.16e}\n", svm.bias));
                out.push_str(&format!("weights = {}\n", join_floats(&svm.weights)));
            }
            Classifier::Mlp(mlp) => {
                out.push_str("[mlp]\n");
                let layers: Vec<String> =
                    mlp.layer_sizes.iter().map(|s| s.to_string()).collect();
                out.push_str(&format!("layers = {}\n", layers.join(" ")));
                out.push_str(&format!("learning_rate = {:.16e}\n", mlp.hyper.learning_rate));
                out.push_str(&format!("epochs = {}\n", mlp.hyper.epochs));
                out.push_str(&format!("batch_size = {}\n", mlp.hyper.batch_size));
                out.push_str(&format!("l2 = {:.16e}\n", mlp.hyper.l2));
                out.push_str(&format!("seed = {}\n", mlp.hyper.seed));
                for (l, (w, b)) in mlp.weights.iter().zip(&mlp.biases).enumerate() {
                    out.push_str(&format!("weights{l} = {}\n", join_floats(w)));
                    out.push_str(&format!("biases{l} = {}\n", join_floats(b)));
                }
            }
        }
        out
    }

    pub fn from_text(raw: &str) -> Result<ModelBundle<F>> {
        let malformed = |reason: &str| Error::MalformedModel {
            reason: reason.to_string(),
        };
        let mut lines = raw.lines().peekable();
        let version = lines.next().ok_or_else(|| malformed("empty model file"))?;
        if version.trim() != MODEL_VERSION {
            return Err(Error::VersionMismatch {
                found: version.trim().to_string(),
                expected: MODEL_VERSION.to_string(),
            });
        }

        let mut header = std::collections::BTreeMap::new();
        while let Some(line) = lines.peek() {
            if line.starts_with('[') {
                break;
            }
            let line = lines.next().unwrap();
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| malformed(&format!("expected key = value, got {line:?}")))?;
            header.insert(key.trim().to_string(), value.trim().to_string());
        }
        let get = |key: &str| -> Result<&String> {
            header
                .get(key)
                .ok_or_else(|| malformed(&format!("missing header key {key:?}")))
        };

        let method = Method::parse(get("method")?)?;
        let toi_name = get("toi")?.clone();
        let toi_token = get("toi_token")?.clone();
        let aliases: Vec<String> = match get("aliases")?.as_str() {
            "" => Vec::new(),
            s => s.split('|').map(|a| a.trim().to_string()).collect(),
        };
        let stem_toi = get("stem_toi")? == "true";
        let positive = Label::parse(get("positive")?)
            .filter(|l| *l != Label::Unknown)
            .ok_or_else(|| malformed("positive must be pos or neg"))?;
        let baseline_full_text = get("baseline_text")? == "full";
        let stopwords: BTreeSet<String> = get("stopwords")?
            .split_whitespace()
            .map(|s| s.to_string())
            .collect();
        let pipeline = PipelineConfig::new(&toi_token, &aliases)?
            .with_stopwords(stopwords)
            .with_stem_toi(stem_toi);
        let vectorizer_kind = get("vectorizer")?.clone();

        if lines.next() != Some("[vocabulary]") {
            return Err(malformed("expected [vocabulary] section"));
        }
        let mut vocab_lines = String::new();
        while let Some(line) = lines.peek() {
            if line.starts_with('[') {
                break;
            }
            vocab_lines.push_str(lines.next().unwrap());
            vocab_lines.push('\n');
        }
        let vectorizer = if vectorizer_kind == "rwov" {
            FittedVectorizer::Rwov(TopWords::from_tsv(&vocab_lines)?)
        } else if vectorizer_kind.starts_with("ngram ") {
            FittedVectorizer::Ngram(NGramVocabulary::from_tsv(&vocab_lines)?)
        } else {
            return Err(malformed(&format!("unknown vectorizer {vectorizer_kind:?}")));
        };

        let section = lines
            .next()
            .ok_or_else(|| malformed("missing classifier section"))?;
        let mut body = std::collections::BTreeMap::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| malformed(&format!("expected key = value, got {line:?}")))?;
            body.insert(key.trim().to_string(), value.trim().to_string());
        }
        let field = |key: &str| -> Result<&String> {
            body.get(key)
                .ok_or_else(|| malformed(&format!("missing {key:?} in {section}")))
        };

        let classifier = match section {
            "[svm]" => {
                let weights = parse_floats::<F>(field("weights")?)?;
                if weights.len() != vectorizer.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: vectorizer.dim(),
                        got: weights.len(),
                    });
                }
                let cw = parse_floats::<F>(field("class_weights")?)?;
                if cw.len() != 2 {
                    return Err(malformed("class_weights needs two values"));
                }
                Classifier::Svm(LinearSvm {
                    weights,
                    bias: parse_float(field("bias")?)?,
                    class_weights: (cw[0], cw[1]),
                    hyper: SvmHyper {
                        lambda: parse_float(field("lambda")?)?,
                        epochs: parse_usize(field("epochs")?)?,
                        learning_rate: parse_float(field("learning_rate")?)?,
                        seed: parse_u64(field("seed")?)?,
                    },
                    epoch_losses: Vec::new(),
                })
            }
            "[mlp]" => {
                let layer_sizes: Vec<usize> = field("layers")?
                    .split_whitespace()
                    .map(parse_usize_str)
                    .collect::<Result<_>>()?;
                if layer_sizes.first() != Some(&vectorizer.dim()) {
                    return Err(Error::DimensionMismatch {
                        expected: vectorizer.dim(),
                        got: layer_sizes.first().copied().unwrap_or(0),
                    });
                }
                let mut weights = Vec::new();
                let mut biases = Vec::new();
                for l in 0..layer_sizes.len() - 1 {
                    let w = parse_floats::<F>(field(&format!("weights{l}"))?)?;
                    let b = parse_floats::<F>(field(&format!("biases{l}"))?)?;
                    if w.len() != layer_sizes[l] * layer_sizes[l + 1]
                        || b.len() != layer_sizes[l + 1]
                    {
                        return Err(Error::DimensionMismatch {
                            expected: layer_sizes[l] * layer_sizes[l + 1],
                            got: w.len(),
                        });
                    }
                    weights.push(w);
                    biases.push(b);
                }
                Classifier::Mlp(Mlp {
                    layer_sizes,
                    weights,
                    biases,
                    hyper: MlpHyper {
                        learning_rate: parse_float(field("learning_rate")?)?,
                        epochs: parse_usize(field("epochs")?)?,
                        batch_size: parse_usize(field("batch_size")?)?,
                        l2: parse_float(field("l2")?)?,
                        seed: parse_u64(field("seed")?)?,
                    },
                    epoch_losses: Vec::new(),
                })
            }
            other => return Err(malformed(&format!("unknown classifier section {other:?}"))),
        };

        Ok(ModelBundle {
            method,
            toi_name,
            pipeline,
            positive,
            baseline_full_text,
            vectorizer,
            classifier,
        })
    }
}

fn join_floats<F: Scalar>(values: &[F]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_float<F: Scalar>(s: &str) -> Result<F> {
    s.parse::<f64>()
        .map(F::from_f64_lossy)
        .map_err(|_| Error::MalformedModel {
            reason: format!("bad float {s:?}"),
        })
}

fn parse_floats<F: Scalar>(s: &str) -> Result<Vec<F>> {
    s.split_whitespace().map(parse_float).collect()
}

fn parse_usize_str(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::MalformedModel {
        reason: format!("bad integer {s:?}"),
    })
}

fn parse_usize(s: &str) -> Result<usize> {
    parse_usize_str(s)
}

fn parse_u64(s: &str) -> Result<u64> {
    s.parse().map_err(|_| Error::MalformedModel {
        reason: format!("bad integer {s:?}"),
    })
}
