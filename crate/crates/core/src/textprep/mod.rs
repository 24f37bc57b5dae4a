//! Deterministic text normalization: sentence segmentation, tokenization,
//! stopword filtering, stemming and TOI localization.

pub mod porter;

pub use porter::stem;

use std::collections::BTreeSet;
use std::path::Path;

use crate::corpus::Document;
use crate::error::{Error, Result};

/// Small built-in function-word list. Deliberately excludes negations
/// ("no", "not"), which carry meaning here.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "there", "here", "it", "its", "they",
    "their", "them", "he", "she", "his", "her", "we", "our", "you", "your", "i", "of", "in", "on",
    "at", "by", "for", "with", "from", "to", "into", "onto", "about", "as", "and", "or", "but",
    "nor", "so", "yet", "is", "are", "was", "were", "be", "been", "being", "am", "do", "does",
    "did", "has", "have", "had", "will", "would", "shall", "should", "can", "could", "may",
    "might",
];

/// The TOI sentence reduced to filtered, stemmed tokens plus the TOI
/// positions within them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreparedDoc {
    pub doc_id: String,
    pub tokens: Vec<String>,
    pub toi_positions: Vec<usize>,
    pub source_sentence_index: usize,
}

/// Normalization options plus the term of interest and its aliases.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    toi: String,
    aliases: Vec<String>,
    stopwords: BTreeSet<String>,
    stem_toi: bool,
}

impl PipelineConfig {
    /// `toi` must be lowercase and survive tokenization as a single token;
    /// aliases must be lowercase and may be multiword.
    pub fn new(toi: &str, aliases: &[String]) -> Result<PipelineConfig> {
        let invalid = |reason: String| Error::InvalidPipelineConfig { reason };
        if toi.is_empty() {
            return Err(invalid("toi is empty".into()));
        }
        if toi != toi.to_lowercase() {
            return Err(invalid(format!("toi {toi:?} is not lowercase")));
        }
        if tokenize(toi) != [toi.to_string()] {
            return Err(invalid(format!("toi {toi:?} is not a single token")));
        }
        for alias in aliases {
            if alias.to_lowercase() != *alias {
                return Err(invalid(format!("alias {alias:?} is not lowercase")));
            }
            if tokenize(alias).is_empty() {
                return Err(invalid(format!("alias {alias:?} has no tokens")));
            }
        }
        Ok(PipelineConfig {
            toi: toi.to_string(),
            aliases: aliases.to_vec(),
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            stem_toi: false,
        })
    }

    pub fn with_stopwords(mut self, stopwords: BTreeSet<String>) -> PipelineConfig {
        self.stopwords = stopwords;
        self
    }

    pub fn with_stem_toi(mut self, stem_toi: bool) -> PipelineConfig {
        self.stem_toi = stem_toi;
        self
    }

    pub fn toi(&self) -> &str {
        &self.toi
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn stem_toi(&self) -> bool {
        self.stem_toi
    }

    /// The token stored at every TOI position of a prepared document.
    pub fn canonical_token(&self) -> String {
        if self.stem_toi {
            stem(&self.toi)
        } else {
            self.toi.clone()
        }
    }

    /// TOI plus aliases as token sequences, longest first so greedy
    /// matching prefers multiword aliases.
    fn patterns(&self) -> Vec<Vec<String>> {
        let mut patterns: Vec<Vec<String>> = std::iter::once(self.toi.clone())
            .chain(self.aliases.iter().cloned())
            .map(|p| tokenize(&p))
            .collect();
        patterns.sort_by_key(|p| std::cmp::Reverse(p.len()));
        patterns
    }
}

/// Load a stopword override file: one lowercase word per line, `#` comments.
pub fn load_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(raw
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect())
}

/// Split text into sentences. Boundaries are '.', '!', '?', ';' and any
/// newline followed by whitespace or end of input; a period between two
/// digits is not a boundary. Sentences are returned trimmed.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0;
    for i in 0..chars.len() {
        let boundary = match chars[i] {
            '!' | '?' | ';' => true,
            '.' => {
                let prev_digit = i > 0 && chars[i - 1].is_ascii_digit();
                let next_digit = i + 1 < chars.len() && chars[i + 1].is_ascii_digit();
                !(prev_digit && next_digit)
            }
            '\n' => i + 1 >= chars.len() || chars[i + 1].is_whitespace(),
            _ => false,
        };
        if boundary {
            let sentence: String = chars[start..=i].iter().collect();
            let sentence = sentence.trim();
            if !sentence.is_empty() {
                sentences.push(sentence.to_string());
            }
            start = i + 1;
        }
    }
    if start < chars.len() {
        let tail: String = chars[start..].iter().collect();
        let tail = tail.trim();
        if !tail.is_empty() {
            sentences.push(tail.to_string());
        }
    }
    sentences
}

/// Lowercased maximal runs of letters and digits; everything else separates.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in sentence.chars() {
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Drop stopword tokens; tokens in `protected` are never dropped.
pub fn filter_stopwords(
    tokens: &[String],
    stopwords: &BTreeSet<String>,
    protected: &BTreeSet<String>,
) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| protected.contains(*t) || !stopwords.contains(*t))
        .cloned()
        .collect()
}

/// Run the front half of the pipeline for one document: select the first
/// sentence containing the TOI (or an alias) as whole tokens, filter, stem,
/// and record the TOI positions. `None` when no sentence contains the TOI.
pub fn prepare(doc: &Document, cfg: &PipelineConfig) -> Option<PreparedDoc> {
    let patterns = cfg.patterns();
    for (sentence_index, sentence) in split_sentences(&doc.text).iter().enumerate() {
        let raw = tokenize(sentence);
        let marked = mark_toi(&raw, &patterns);
        if !marked.iter().any(|(_, is_toi)| *is_toi) {
            continue;
        }
        let canonical = cfg.canonical_token();
        let mut tokens = Vec::new();
        let mut toi_positions = Vec::new();
        for (token, is_toi) in marked {
            if is_toi {
                toi_positions.push(tokens.len());
                tokens.push(canonical.clone());
            } else if !cfg.stopwords.contains(&token) {
                tokens.push(stem(&token));
            }
        }
        return Some(PreparedDoc {
            doc_id: doc.id.clone(),
            tokens,
            toi_positions,
            source_sentence_index: sentence_index,
        });
    }
    None
}

/// Tokenize an entire document through the same filter/stem pipeline,
/// ignoring TOI localization. Used by the full-text baseline option.
pub fn prepare_full_text(doc: &Document, cfg: &PipelineConfig) -> Vec<String> {
    let patterns = cfg.patterns();
    let canonical = cfg.canonical_token();
    let mut tokens = Vec::new();
    for sentence in split_sentences(&doc.text) {
        let raw = tokenize(&sentence);
        for (token, is_toi) in mark_toi(&raw, &patterns) {
            if is_toi {
                tokens.push(canonical.clone());
            } else if !cfg.stopwords.contains(&token) {
                tokens.push(stem(&token));
            }
        }
    }
    tokens
}

/// Greedy left-to-right match of TOI/alias token sequences; a multiword
/// alias collapses to one marked token at its first word's position.
fn mark_toi(raw: &[String], patterns: &[Vec<String>]) -> Vec<(String, bool)> {
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let hit = patterns
            .iter()
            .find(|p| raw[i..].len() >= p.len() && raw[i..i + p.len()] == p[..]);
        match hit {
            Some(pattern) => {
                out.push((String::new(), true));
                i += pattern.len();
            }
            None => {
                out.push((raw[i].clone(), false));
                i += 1;
            }
        }
    }
    out
}
