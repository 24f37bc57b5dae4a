//! Labeled document corpora: disk ingestion and synthetic generation.

mod synth;
mod templates;

pub use synth::{generate_synthetic, preset, CorpusSpec, ToiPreset};
pub use templates::TemplateBank;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Per-term binary determination carried by a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
    Unknown,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "pos",
            Label::Negative => "neg",
            Label::Unknown => "unk",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "pos" => Some(Label::Positive),
            "neg" => Some(Label::Negative),
            "unk" | "" => Some(Label::Unknown),
            _ => None,
        }
    }

    /// The opposite determination; `Unknown` stays `Unknown`.
    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
            Label::Unknown => Label::Unknown,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One raw text block with its per-term labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub labels: BTreeMap<String, Label>,
}

impl Document {
    pub fn label(&self, toi: &str) -> Label {
        self.labels.get(toi).copied().unwrap_or(Label::Unknown)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(format!("unknown corpus format {other:?} (expected jsonl|csv)")),
        }
    }
}

/// Load documents in file order. Duplicate ids and unknown label strings
/// are rejected with the offending line number.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<Document>> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        CorpusFormat::Jsonl => parse_jsonl(&raw),
        CorpusFormat::Csv => parse_csv(&raw),
    }
}

pub fn parse_jsonl(raw: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, line) in raw.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
                line: line_no,
                reason: e.to_string(),
            })?;
        let doc = document_from_value(&value, line_no)?;
        if !seen.insert(doc.id.clone()) {
            return Err(Error::DuplicateId {
                id: doc.id,
                line: line_no,
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

fn document_from_value(value: &serde_json::Value, line: usize) -> Result<Document> {
    let obj = value.as_object().ok_or_else(|| Error::MalformedRecord {
        line,
        reason: "record is not a JSON object".into(),
    })?;
    let field_str = |name: &str| -> Result<String> {
        let v = obj.get(name).ok_or_else(|| Error::MalformedRecord {
            line,
            reason: format!("missing {name:?} field"),
        })?;
        let s = v.as_str().ok_or_else(|| Error::MalformedRecord {
            line,
            reason: format!("{name:?} is not a string"),
        })?;
        if s.is_empty() {
            return Err(Error::MalformedRecord {
                line,
                reason: format!("{name:?} is empty"),
            });
        }
        Ok(s.to_string())
    };
    let id = field_str("id")?;
    let text = field_str("text")?;
    let mut labels = BTreeMap::new();
    if let Some(raw_labels) = obj.get("labels") {
        let map = raw_labels.as_object().ok_or_else(|| Error::MalformedRecord {
            line,
            reason: "\"labels\" is not an object".into(),
        })?;
        for (toi, v) in map {
            let s = v.as_str().ok_or_else(|| Error::MalformedRecord {
                line,
                reason: format!("label for {toi:?} is not a string"),
            })?;
            let label = Label::parse(s).ok_or_else(|| Error::UnknownLabelValue {
                line,
                toi: toi.clone(),
                value: s.to_string(),
            })?;
            labels.insert(toi.clone(), label);
        }
    }
    Ok(Document { id, text, labels })
}

pub fn parse_csv(raw: &str) -> Result<Vec<Document>> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(raw.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedRecord {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() < 2 || cols[0] != "id" || cols[1] != "text" {
        return Err(Error::MalformedRecord {
            line: 1,
            reason: format!("header must start with id,text (got {:?})", cols.join(",")),
        });
    }
    let tois: Vec<String> = cols[2..].iter().map(|s| s.to_string()).collect();

    let mut docs = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, record) in reader.records().enumerate() {
        let line_no = idx + 2; // header is line 1
        let record = record.map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: e.to_string(),
        })?;
        if record.len() != cols.len() {
            return Err(Error::MalformedRecord {
                line: line_no,
                reason: format!("expected {} fields, got {}", cols.len(), record.len()),
            });
        }
        let id = record[0].to_string();
        let text = record[1].to_string();
        if id.is_empty() || text.is_empty() {
            return Err(Error::MalformedRecord {
                line: line_no,
                reason: "empty id or text".into(),
            });
        }
        let mut labels = BTreeMap::new();
        for (toi, value) in tois.iter().zip(record.iter().skip(2)) {
            let label = Label::parse(value).ok_or_else(|| Error::UnknownLabelValue {
                line: line_no,
                toi: toi.clone(),
                value: value.to_string(),
            })?;
            labels.insert(toi.clone(), label);
        }
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId { id, line: line_no });
        }
        docs.push(Document { id, text, labels });
    }
    Ok(docs)
}

pub fn to_jsonl(docs: &[Document]) -> String {
    let mut out = String::new();
    for doc in docs {
        let labels: serde_json::Map<String, serde_json::Value> = doc
            .labels
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.as_str().into())))
            .collect();
        let value = serde_json::json!({
            "id": doc.id,
            "text": doc.text,
            "labels": labels,
        });
        out.push_str(&value.to_string());
        out.push('\n');
    }
    out
}

/// Render as CSV with the given label columns, e.g. `id,text,ER,PR,HER2`.
pub fn to_csv(docs: &[Document], toi_columns: &[String]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string(), "text".to_string()];
    header.extend(toi_columns.iter().cloned());
    writer.write_record(&header).expect("in-memory csv write");
    for doc in docs {
        let mut record = vec![doc.id.clone(), doc.text.clone()];
        for toi in toi_columns {
            record.push(doc.label(toi).as_str().to_string());
        }
        writer.write_record(&record).expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

/// Label columns in first-seen order across the corpus.
pub fn toi_columns(docs: &[Document]) -> Vec<String> {
    let mut cols = Vec::new();
    let mut seen = BTreeSet::new();
    for doc in docs {
        for toi in doc.labels.keys() {
            if seen.insert(toi.clone()) {
                cols.push(toi.clone());
            }
        }
    }
    cols
}
