//! Word-order vectorization: signed inverse-distance features of the most
//! frequent co-occurring words around the term of interest.
//!
//! Each matrix cell holds s/(k+1) where k is the number of top words
//! strictly between the column word and the TOI, and s is -1 when the word
//! occurs before the TOI, +1 after. 0 is reserved for absence, so values
//! decay from |1| (adjacent) toward 0 without ever reaching it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textprep::PreparedDoc;

/// The ordered relevant-word vocabulary: column order of the feature matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopWords {
    words: Vec<String>,
    counts: Vec<usize>,
}

impl TopWords {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Plain-text serialization: one `word<TAB>count` per line, column order.
    pub fn to_tsv(&self) -> String {
        self.words
            .iter()
            .zip(&self.counts)
            .map(|(w, c)| format!("{w}\t{c}\n"))
            .collect()
    }

    pub fn from_tsv(raw: &str) -> Result<TopWords> {
        let mut words = Vec::new();
        let mut counts = Vec::new();
        for (idx, line) in raw.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (word, count) = line.split_once('\t').ok_or_else(|| Error::MalformedModel {
                reason: format!("top-words line {} lacks a tab", idx + 1),
            })?;
            let count: usize = count.parse().map_err(|_| Error::MalformedModel {
                reason: format!("top-words line {} has a bad count {count:?}", idx + 1),
            })?;
            words.push(word.to_string());
            counts.push(count);
        }
        Ok(TopWords { words, counts })
    }
}

/// Select the n most frequent non-TOI stems across all prepared token lists.
/// Frequency is total token occurrences; ties break by ascending word order.
pub fn select_top_words(prepared: &[PreparedDoc], n: usize) -> Result<TopWords> {
    if prepared.is_empty() {
        return Err(Error::EmptyInput {
            what: "no prepared documents to select top words from".into(),
        });
    }
    if n == 0 {
        return Err(Error::EmptyInput {
            what: "top word count n must be >= 1".into(),
        });
    }
    let toi_token = prepared[0].tokens[prepared[0].toi_positions[0]].clone();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in prepared {
        for token in &doc.tokens {
            if token != &toi_token {
                *counts.entry(token.as_str()).or_insert(0) += 1;
            }
        }
    }
    let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(n);
    Ok(TopWords {
        words: ranked.iter().map(|(w, _)| w.to_string()).collect(),
        counts: ranked.iter().map(|(_, c)| *c).collect(),
    })
}

/// One feature row. For each top word: 0 when absent; otherwise s/(k+1)
/// minimized over all (word occurrence, TOI occurrence) pairs, where k is
/// the count of top words strictly between the pair and s is the side of
/// the nearest pair. A before/after tie at equal k resolves to after (+).
pub fn vectorize_doc<F: Scalar>(doc: &PreparedDoc, top: &TopWords) -> Vec<F> {
    debug_assert!(!doc.toi_positions.is_empty(), "prepared docs locate the TOI");
    let column: BTreeMap<&str, usize> = top
        .words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();

    // prefix[i] = number of top-word tokens among tokens[..i]
    let mut prefix = Vec::with_capacity(doc.tokens.len() + 1);
    prefix.push(0usize);
    for token in &doc.tokens {
        let is_top = column.contains_key(token.as_str()) as usize;
        prefix.push(prefix.last().unwrap() + is_top);
    }
    let between = |a: usize, b: usize| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prefix[hi] - prefix[lo + 1]
    };

    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); top.len()];
    for (i, token) in doc.tokens.iter().enumerate() {
        if let Some(&c) = column.get(token.as_str()) {
            occurrences[c].push(i);
        }
    }

    occurrences
        .iter()
        .map(|positions| {
            let mut best: Option<(usize, bool)> = None; // (k, after)
            for &pw in positions {
                for &pt in &doc.toi_positions {
                    let k = between(pw, pt);
                    let after = pw > pt;
                    let better = match best {
                        None => true,
                        Some((bk, bafter)) => k < bk || (k == bk && after && !bafter),
                    };
                    if better {
                        best = Some((k, after));
                    }
                }
            }
            match best {
                None => F::zero(),
                Some((k, after)) => {
                    let magnitude = F::one() / F::from_usize_lossy(k + 1);
                    if after {
                        magnitude
                    } else {
                        -magnitude
                    }
                }
            }
        })
        .collect()
}

/// m x n matrix of word-order features; rows follow input document order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<F> {
    pub row_ids: Vec<String>,
    pub columns: TopWords,
    values: Vec<Vec<F>>,
}

impl<F: Scalar> FeatureMatrix<F> {
    pub fn n_rows(&self) -> usize {
        self.values.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.values[r]
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.values
    }

    pub fn value(&self, r: usize, c: usize) -> F {
        self.values[r][c]
    }

    /// CSV with a `doc_id,<word...>` header; 17 significant digits so
    /// parsing the export reproduces the matrix exactly.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("doc_id");
        for word in self.columns.words() {
            out.push(',');
            out.push_str(word);
        }
        out.push('\n');
        for (id, row) in self.row_ids.iter().zip(&self.values) {
            out.push_str(id);
            for v in row {
                out.push(',');
                out.push_str(&format!("{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(raw: &str) -> Result<FeatureMatrix<F>> {
        let malformed = |reason: String| Error::MalformedModel { reason };
        let mut lines = raw.lines();
        let header = lines.next().ok_or_else(|| malformed("empty matrix csv".into()))?;
        let mut cols = header.split(',');
        if cols.next() != Some("doc_id") {
            return Err(malformed("matrix csv header must start with doc_id".into()));
        }
        let words: Vec<String> = cols.map(|s| s.to_string()).collect();
        let mut row_ids = Vec::new();
        let mut values = Vec::new();
        for (idx, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let id = fields
                .next()
                .ok_or_else(|| malformed(format!("matrix row {} is empty", idx + 2)))?;
            let row: Vec<F> = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map(F::from_f64_lossy)
                        .map_err(|_| malformed(format!("bad value {f:?} in row {}", idx + 2)))
                })
                .collect::<Result<_>>()?;
            if row.len() != words.len() {
                return Err(malformed(format!(
                    "row {} has {} values, expected {}",
                    idx + 2,
                    row.len(),
                    words.len()
                )));
            }
            row_ids.push(id.to_string());
            values.push(row);
        }
        let counts = vec![0; words.len()];
        Ok(FeatureMatrix {
            row_ids,
            columns: TopWords { words, counts },
            values,
        })
    }
}

/// Fit the vocabulary on `prepared` and vectorize it row by row.
pub fn fit_transform<F: Scalar>(
    prepared: &[PreparedDoc],
    n: usize,
) -> Result<(TopWords, FeatureMatrix<F>)> {
    let top = select_top_words(prepared, n)?;
    let matrix = transform(prepared, &top);
    Ok((top, matrix))
}

/// Vectorize against a frozen vocabulary; unseen words are ignored and
/// never count as intervening.
pub fn transform<F: Scalar>(prepared: &[PreparedDoc], top: &TopWords) -> FeatureMatrix<F> {
    FeatureMatrix {
        row_ids: prepared.iter().map(|d| d.doc_id.clone()).collect(),
        columns: top.clone(),
        values: prepared.iter().map(|d| vectorize_doc(d, top)).collect(),
    }
}
