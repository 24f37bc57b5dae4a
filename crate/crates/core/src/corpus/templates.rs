//! Sectioned template bank backing the synthetic generator.

use std::collections::BTreeMap;
use std::path::Path;

use crate::corpus::Label;
use crate::error::{Error, Result};

const DEFAULT_BANK: &str = include_str!("default_templates.txt");

/// Positive/negative phrasings per TOI plus a distractor pool. Doubles as
/// the sentence-to-label lookup table for generated corpora.
#[derive(Debug, Clone)]
pub struct TemplateBank {
    sections: BTreeMap<(String, Label), Vec<String>>,
    distractors: Vec<String>,
}

impl TemplateBank {
    /// The bank shipped with the crate (breast-marker phrasings).
    pub fn builtin() -> TemplateBank {
        TemplateBank::parse(DEFAULT_BANK).expect("builtin bank parses")
    }

    pub fn load(path: &Path) -> Result<TemplateBank> {
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        TemplateBank::parse(&raw)
    }

    /// Parse the sectioned plain-text format: `[TOI <name> pos]`,
    /// `[TOI <name> neg]`, `[distractor]`, one template per line,
    /// `#` comments allowed.
    pub fn parse(raw: &str) -> Result<TemplateBank> {
        enum Section {
            None,
            Toi(String, Label),
            Distractor,
        }
        let mut current = Section::None;
        let mut sections: BTreeMap<(String, Label), Vec<String>> = BTreeMap::new();
        let mut distractors = Vec::new();
        for (idx, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let parts: Vec<&str> = header.split_whitespace().collect();
                current = match parts.as_slice() {
                    ["distractor"] => Section::Distractor,
                    ["TOI", name, "pos"] => Section::Toi(name.to_string(), Label::Positive),
                    ["TOI", name, "neg"] => Section::Toi(name.to_string(), Label::Negative),
                    _ => {
                        return Err(Error::MalformedRecord {
                            line: idx + 1,
                            reason: format!("unrecognized template section {header:?}"),
                        })
                    }
                };
                continue;
            }
            match &current {
                Section::None => {
                    return Err(Error::MalformedRecord {
                        line: idx + 1,
                        reason: "template before any section header".into(),
                    })
                }
                Section::Toi(name, label) => sections
                    .entry((name.clone(), *label))
                    .or_default()
                    .push(line.to_string()),
                Section::Distractor => distractors.push(line.to_string()),
            }
        }
        Ok(TemplateBank {
            sections,
            distractors,
        })
    }

    pub fn tois(&self) -> Vec<String> {
        let mut names: Vec<String> = self.sections.keys().map(|(n, _)| n.clone()).collect();
        names.dedup();
        names
    }

    pub fn templates(&self, toi: &str, label: Label) -> &[String] {
        self.sections
            .get(&(toi.to_string(), label))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn distractors(&self) -> &[String] {
        &self.distractors
    }

    /// Check the bank can generate every requested TOI.
    pub fn validate_for(&self, tois: &[String]) -> Result<()> {
        for toi in tois {
            for label in [Label::Positive, Label::Negative] {
                if self.templates(toi, label).is_empty() {
                    return Err(Error::EmptyTemplateBank {
                        section: format!("TOI {toi} {label}"),
                    });
                }
            }
        }
        if self.distractors.is_empty() {
            return Err(Error::EmptyTemplateBank {
                section: "distractor".into(),
            });
        }
        Ok(())
    }

    /// Reverse lookup: which label does a generated sentence assert for the
    /// TOI? Trailing sentence punctuation is ignored.
    pub fn label_of(&self, toi: &str, sentence: &str) -> Option<Label> {
        let bare = sentence.trim().trim_end_matches(['.', '!', '?', ';']);
        for label in [Label::Positive, Label::Negative] {
            if self.templates(toi, label).iter().any(|t| t == bare) {
                return Some(label);
            }
        }
        None
    }
}
