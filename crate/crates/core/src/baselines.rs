//! The comparison vectorizer: n-gram counts over token windows with
//! smoothed IDF weighting and L2 row normalization.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fitted n-gram vocabulary. Grams are tokens joined by single spaces,
/// ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NGramVocabulary {
    grams: Vec<String>,
    range: (usize, usize),
    doc_freq: Vec<usize>,
    n_docs_fit: usize,
}

impl NGramVocabulary {
    pub fn grams(&self) -> &[String] {
        &self.grams
    }

    pub fn range(&self) -> (usize, usize) {
        self.range
    }

    pub fn doc_freq(&self) -> &[usize] {
        &self.doc_freq
    }

    pub fn n_docs_fit(&self) -> usize {
        self.n_docs_fit
    }

    pub fn len(&self) -> usize {
        self.grams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grams.is_empty()
    }

    /// `gram<TAB>doc_freq` per line, lexicographic order, with a leading
    /// metadata line carrying the range and fit size.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "#range\t{}\t{}\t{}\n",
            self.range.0, self.range.1, self.n_docs_fit
        );
        for (g, df) in self.grams.iter().zip(&self.doc_freq) {
            out.push_str(&format!("{g}\t{df}\n"));
        }
        out
    }

    pub fn from_tsv(raw: &str) -> Result<NGramVocabulary> {
        let malformed = |reason: String| Error::MalformedModel { reason };
        let mut lines = raw.lines();
        let meta = lines
            .next()
            .ok_or_else(|| malformed("empty n-gram vocabulary".into()))?;
        let parts: Vec<&str> = meta.split('\t').collect();
        if parts.len() != 4 || parts[0] != "#range" {
            return Err(malformed("vocabulary must start with a #range line".into()));
        }
        let parse = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| malformed(format!("bad number {s:?} in #range line")))
        };
        let range = (parse(parts[1])?, parse(parts[2])?);
        let n_docs_fit = parse(parts[3])?;
        let mut grams = Vec::new();
        let mut doc_freq = Vec::new();
        for (idx, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let (gram, df) = line.split_once('\t').ok_or_else(|| {
                malformed(format!("vocabulary line {} lacks a tab", idx + 2))
            })?;
            grams.push(gram.to_string());
            doc_freq.push(parse(df)?);
        }
        Ok(NGramVocabulary {
            grams,
            range,
            doc_freq,
            n_docs_fit,
        })
    }
}

fn windows(tokens: &[String], range: (usize, usize)) -> impl Iterator<Item = String> + '_ {
    (range.0..=range.1).flat_map(move |n| tokens.windows(n).map(|w| w.join(" ")))
}

/// Collect every contiguous token window of length lo..=hi across the
/// corpus; document frequency counts presence, not multiplicity.
pub fn ngram_fit(docs: &[Vec<String>], range: (usize, usize)) -> Result<NGramVocabulary> {
    let (lo, hi) = range;
    if lo < 1 || hi < lo {
        return Err(Error::InvalidRange { lo, hi });
    }
    let mut doc_freq: BTreeMap<String, usize> = BTreeMap::new();
    for tokens in docs {
        let in_doc: BTreeSet<String> = windows(tokens, range).collect();
        for gram in in_doc {
            *doc_freq.entry(gram).or_insert(0) += 1;
        }
    }
    let (grams, doc_freq): (Vec<String>, Vec<usize>) = doc_freq.into_iter().unzip();
    Ok(NGramVocabulary {
        grams,
        range,
        doc_freq,
        n_docs_fit: docs.len(),
    })
}

/// Count vocabulary grams per document (multiplicity); unseen grams ignored.
pub fn ngram_transform(docs: &[Vec<String>], vocab: &NGramVocabulary) -> Vec<Vec<u32>> {
    let index: BTreeMap<&str, usize> = vocab
        .grams
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_str(), i))
        .collect();
    docs.iter()
        .map(|tokens| {
            let mut row = vec![0u32; vocab.len()];
            for gram in windows(tokens, vocab.range) {
                if let Some(&c) = index.get(gram.as_str()) {
                    row[c] += 1;
                }
            }
            row
        })
        .collect()
}

/// The per-gram IDF factor: ln((1 + N) / (1 + df)) + 1.
pub fn idf_factor<F: Scalar>(n_docs_fit: usize, doc_freq: usize) -> F {
    let n = F::from_usize_lossy(n_docs_fit);
    let df = F::from_usize_lossy(doc_freq);
    ((F::one() + n) / (F::one() + df)).ln() + F::one()
}

/// Weight counts by smoothed IDF, then scale each row to unit Euclidean
/// norm (zero rows stay zero).
pub fn idf_weight<F: Scalar>(counts: &[Vec<u32>], vocab: &NGramVocabulary) -> Vec<Vec<F>> {
    let factors: Vec<F> = vocab
        .doc_freq
        .iter()
        .map(|&df| idf_factor(vocab.n_docs_fit, df))
        .collect();
    counts
        .iter()
        .map(|row| {
            let mut weighted: Vec<F> = row
                .iter()
                .zip(&factors)
                .map(|(&c, &f)| F::from_u32(c).expect("count fits any scalar") * f)
                .collect();
            let norm = weighted
                .iter()
                .fold(F::zero(), |acc, &v| acc + v * v)
                .sqrt();
            if norm > F::zero() {
                for v in &mut weighted {
                    *v = *v / norm;
                }
            }
            weighted
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(docs: &[&[&str]]) -> Vec<Vec<String>> {
        docs.iter()
            .map(|d| d.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn fit_enumerates_windows_in_lexicographic_order() {
        let vocab = ngram_fit(&toks(&[&["a", "b", "c"]]), (1, 2)).unwrap();
        assert_eq!(vocab.grams(), ["a", "a b", "b", "b c", "c"]);
    }

    #[test]
    fn short_docs_contribute_nothing_to_long_ranges() {
        let vocab = ngram_fit(&toks(&[&["a", "b"]]), (3, 3)).unwrap();
        assert!(vocab.is_empty());
    }

    #[test]
    fn doc_freq_counts_presence_not_multiplicity() {
        let vocab = ngram_fit(&toks(&[&["a"], &["a", "a"]]), (1, 1)).unwrap();
        assert_eq!(vocab.grams(), ["a"]);
        assert_eq!(vocab.doc_freq(), [2]);
    }

    #[test]
    fn invalid_ranges_rejected() {
        assert!(matches!(
            ngram_fit(&toks(&[&["a"]]), (0, 1)),
            Err(Error::InvalidRange { .. })
        ));
        assert!(matches!(
            ngram_fit(&toks(&[&["a"]]), (3, 2)),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn transform_counts_multiplicity() {
        let docs = toks(&[&["a", "b", "a"]]);
        let vocab = ngram_fit(&docs, (1, 1)).unwrap();
        let counts = ngram_transform(&docs, &vocab);
        assert_eq!(vocab.grams(), ["a", "b"]);
        assert_eq!(counts, vec![vec![2, 1]]);
    }

    #[test]
    fn empty_and_unseen_docs_are_zero_rows() {
        let vocab = ngram_fit(&toks(&[&["a", "b"]]), (1, 2)).unwrap();
        let counts = ngram_transform(&toks(&[&[], &["z", "q"]]), &vocab);
        assert!(counts.iter().all(|row| row.iter().all(|&c| c == 0)));
    }

    #[test]
    fn gram_in_every_document_has_idf_factor_one() {
        assert_eq!(idf_factor::<f64>(10, 10), 1.0);
    }

    #[test]
    fn single_doc_corpus_normalizes_to_unit() {
        let docs = toks(&[&["a", "a"]]);
        let vocab = ngram_fit(&docs, (1, 1)).unwrap();
        let weighted = idf_weight::<f64>(&ngram_transform(&docs, &vocab), &vocab);
        assert_eq!(weighted, vec![vec![1.0]]);
    }

    #[test]
    fn zero_rows_stay_zero() {
        let vocab = ngram_fit(&toks(&[&["a"]]), (1, 1)).unwrap();
        let weighted = idf_weight::<f64>(&ngram_transform(&toks(&[&[]]), &vocab), &vocab);
        assert_eq!(weighted, vec![vec![0.0]]);
    }

    #[test]
    fn weighted_rows_have_unit_or_zero_norm() {
        let docs = toks(&[
            &["a", "b", "c", "a"],
            &["b", "c"],
            &["q"],
            &[],
            &["a", "a", "a"],
        ]);
        let vocab = ngram_fit(&docs, (1, 2)).unwrap();
        let weighted = idf_weight::<f64>(&ngram_transform(&docs, &vocab), &vocab);
        for row in &weighted {
            let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm.abs() < 1e-12 || (norm - 1.0).abs() < 1e-12, "norm {norm}");
        }
    }

    #[test]
    fn vocabulary_tsv_round_trip() {
        let vocab = ngram_fit(&toks(&[&["a", "b", "c"], &["b", "c"]]), (1, 3)).unwrap();
        assert_eq!(NGramVocabulary::from_tsv(&vocab.to_tsv()).unwrap(), vocab);
    }
}
