//! Deterministic synthetic corpus generation.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{Document, Label, TemplateBank};
use crate::error::{Error, Result};
use crate::seed::stream_rng;

/// Recipe for a synthetic corpus. Generation is a pure function of the
/// spec (plus the bank): identical specs yield byte-identical corpora.
#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub n_docs: usize,
    /// (TOI name, positive fraction), in output column order.
    pub prevalence: Vec<(String, f64)>,
    /// Fraction of documents whose label-bearing sentence is perturbed:
    /// either replaced by an opposite-class phrasing (contradictory) or
    /// dropped entirely (distractor-only).
    pub noise_rate: f64,
    pub seed: u64,
}

/// Named TOI preset: prevalence plus the aliases the pipeline should match.
#[derive(Debug, Clone)]
pub struct ToiPreset {
    pub name: String,
    pub prevalence: f64,
    pub aliases: Vec<String>,
}

/// Look up a built-in preset by name. `table1` carries the three breast
/// hormone-receptor prevalences the default bank is written for.
pub fn preset(name: &str) -> Option<Vec<ToiPreset>> {
    match name {
        "table1" => Some(vec![
            ToiPreset {
                name: "ER".into(),
                prevalence: 0.775,
                aliases: vec!["estrogen receptor".into()],
            },
            ToiPreset {
                name: "PR".into(),
                prevalence: 0.639,
                aliases: vec!["progesterone receptor".into()],
            },
            ToiPreset {
                name: "HER2".into(),
                prevalence: 0.149,
                aliases: vec!["her2 neu".into()],
            },
        ]),
        _ => None,
    }
}

pub fn generate_synthetic(spec: &CorpusSpec, bank: &TemplateBank) -> Result<Vec<Document>> {
    validate(spec)?;
    let tois: Vec<String> = spec.prevalence.iter().map(|(t, _)| t.clone()).collect();
    bank.validate_for(&tois)?;

    let n = spec.n_docs;
    let mut rng = stream_rng(spec.seed, "synth");

    // Per-TOI label assignment hits round(prevalence * n) positives exactly.
    let mut labels: Vec<Vec<Label>> = Vec::with_capacity(tois.len());
    for (_, prevalence) in &spec.prevalence {
        let n_pos = (prevalence * n as f64).round() as usize;
        let mut column: Vec<Label> = (0..n)
            .map(|i| if i < n_pos { Label::Positive } else { Label::Negative })
            .collect();
        column.shuffle(&mut rng);
        labels.push(column);
    }

    // Pick which documents are noisy, one perturbed TOI each.
    let n_noisy = (spec.noise_rate * n as f64).round() as usize;
    let mut doc_order: Vec<usize> = (0..n).collect();
    doc_order.shuffle(&mut rng);
    let mut perturbation: Vec<Option<(usize, bool)>> = vec![None; n]; // (toi index, contradict?)
    for &doc in doc_order.iter().take(n_noisy) {
        let toi_idx = rng.gen_range(0..tois.len());
        let contradict = rng.gen_bool(0.5);
        perturbation[doc] = Some((toi_idx, contradict));
    }

    let width = n.to_string().len().max(4);
    let mut docs = Vec::with_capacity(n);
    for i in 0..n {
        let mut sentences: Vec<String> = Vec::new();
        for (t, toi) in tois.iter().enumerate() {
            let label = labels[t][i];
            let (effective, include) = match perturbation[i] {
                Some((p, contradict)) if p == t => {
                    if contradict {
                        (label.flipped(), true)
                    } else {
                        (label, false) // distractor-only: drop the TOI sentence
                    }
                }
                _ => (label, true),
            };
            if include {
                let pool = bank.templates(toi, effective);
                let template = pool.choose(&mut rng).expect("validated nonempty");
                sentences.push(template.clone());
            }
        }
        let n_distractors = rng.gen_range(2..=6usize);
        for _ in 0..n_distractors {
            let distractor = bank.distractors().choose(&mut rng).expect("validated nonempty");
            sentences.push(distractor.clone());
        }
        sentences.shuffle(&mut rng);

        let text = format!("{}.", sentences.join(". "));
        let doc_labels = tois
            .iter()
            .enumerate()
            .map(|(t, toi)| (toi.clone(), labels[t][i]))
            .collect();
        docs.push(Document {
            id: format!("doc-{i:0width$}"),
            text,
            labels: doc_labels,
        });
    }
    Ok(docs)
}

fn validate(spec: &CorpusSpec) -> Result<()> {
    if spec.n_docs < 2 {
        return Err(Error::InvalidCorpusSpec {
            reason: format!("n_docs must be >= 2, got {}", spec.n_docs),
        });
    }
    if spec.prevalence.is_empty() {
        return Err(Error::InvalidCorpusSpec {
            reason: "no TOIs given".into(),
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for (toi, p) in &spec.prevalence {
        if !(0.0..=1.0).contains(p) {
            return Err(Error::InvalidPrevalence {
                toi: toi.clone(),
                value: *p,
            });
        }
        if !seen.insert(toi.clone()) {
            return Err(Error::InvalidCorpusSpec {
                reason: format!("duplicate TOI {toi:?}"),
            });
        }
    }
    if !(0.0..1.0).contains(&spec.noise_rate) {
        return Err(Error::InvalidCorpusSpec {
            reason: format!("noise_rate must be in [0, 1), got {}", spec.noise_rate),
        });
    }
    Ok(())
}
