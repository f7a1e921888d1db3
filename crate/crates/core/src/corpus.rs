//! Definition corpora and classroom Q&A logs.
//!
//! Both inputs reduce to [`Transaction`]s: an ordered list of prerequisite
//! terms that together explain a target term. Definitions come from a JSON
//! array of `{"term", "keywords"}` objects, Q&A logs from JSON Lines of
//! `{"question", "answer_keywords"}` records.

use std::collections::{BTreeSet, HashSet};

use serde::de;
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::ROOT;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("invalid term {0:?}: empty after normalization")]
    InvalidTerm(String),
    #[error("term {0:?} is reserved for the graph root")]
    ReservedTerm(String),
    #[error("term {0:?} lists itself as a prerequisite")]
    SelfReference(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate definition for {term:?}")]
    DuplicateDefinition { term: String, line: usize },
    #[error("record {index}: {message}")]
    Record { index: usize, message: String },
}

/// Lowercases, trims and collapses internal whitespace runs.
pub fn normalize_term(raw: &str) -> Result<String, CorpusError> {
    let normalized = raw
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ");
    if normalized.is_empty() {
        return Err(CorpusError::InvalidTerm(raw.to_string()));
    }
    Ok(normalized)
}

fn normalize_vocabulary_term(raw: &str) -> Result<String, CorpusError> {
    let term = normalize_term(raw)?;
    if term == ROOT {
        return Err(CorpusError::ReservedTerm(term));
    }
    Ok(term)
}

/// Normalizes a keyword list, keeping the first occurrence of each term.
fn normalize_keywords<S: AsRef<str>>(target: &str, raw: &[S]) -> Result<Vec<String>, CorpusError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for keyword in raw {
        let keyword = normalize_vocabulary_term(keyword.as_ref())?;
        if keyword == target {
            return Err(CorpusError::SelfReference(keyword));
        }
        if seen.insert(keyword.clone()) {
            out.push(keyword);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransactionKind {
    Definition,
    QA,
}

/// A target term together with the ordered prerequisites used to explain it.
///
/// Constructed only through [`Transaction::definition`] / [`Transaction::qa`],
/// so every value is normalized, duplicate-free and never lists its own
/// target.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transaction {
    target: String,
    prerequisites: Vec<String>,
    kind: TransactionKind,
}

impl Transaction {
    pub fn new<S: AsRef<str>>(
        target: &str,
        prerequisites: &[S],
        kind: TransactionKind,
    ) -> Result<Self, CorpusError> {
        let target = normalize_vocabulary_term(target)?;
        let prerequisites = normalize_keywords(&target, prerequisites)?;
        Ok(Transaction {
            target,
            prerequisites,
            kind,
        })
    }

    pub fn definition<S: AsRef<str>>(
        target: &str,
        prerequisites: &[S],
    ) -> Result<Self, CorpusError> {
        Self::new(target, prerequisites, TransactionKind::Definition)
    }

    pub fn qa<S: AsRef<str>>(target: &str, prerequisites: &[S]) -> Result<Self, CorpusError> {
        Self::new(target, prerequisites, TransactionKind::QA)
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn prerequisites(&self) -> &[String] {
        &self.prerequisites
    }

    pub fn kind(&self) -> TransactionKind {
        self.kind
    }

    /// The term sequence of the branch: prerequisites followed by the target.
    pub fn sequence(&self) -> impl Iterator<Item = &str> {
        self.prerequisites
            .iter()
            .map(String::as_str)
            .chain(std::iter::once(self.target.as_str()))
    }
}

/// A dictionary entry reduced to its emphasized keywords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDefinition {
    pub term: String,
    pub body_keywords: Vec<String>,
}

impl TermDefinition {
    pub fn new<S: AsRef<str>>(term: &str, keywords: &[S]) -> Result<Self, CorpusError> {
        let term = normalize_vocabulary_term(term)?;
        let body_keywords = normalize_keywords(&term, keywords)?;
        Ok(TermDefinition {
            term,
            body_keywords,
        })
    }
}

pub fn to_transaction(defn: &TermDefinition) -> Transaction {
    Transaction {
        target: defn.term.clone(),
        prerequisites: defn.body_keywords.clone(),
        kind: TransactionKind::Definition,
    }
}

#[derive(Serialize, Deserialize)]
struct RawDefinition {
    term: String,
    keywords: Vec<String>,
}

impl<'de> Deserialize<'de> for TermDefinition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawDefinition::deserialize(deserializer)?;
        TermDefinition::new(&raw.term, &raw.keywords).map_err(de::Error::custom)
    }
}

fn line_of(input: &str, fragment: &str) -> usize {
    let offset = fragment.as_ptr() as usize - input.as_ptr() as usize;
    1 + input[..offset].matches('\n').count()
}

/// Drops serde_json's trailing " at line L column C".
fn cause(err: &serde_json::Error) -> String {
    let message = err.to_string();
    message
        .rsplit_once(" at line ")
        .map_or(message.as_str(), |(head, _)| head)
        .to_string()
}

/// Parses a definitions file. An empty (or whitespace-only) input is an empty corpus.
///
/// Errors carry the line on which the offending entry starts.
pub fn parse_definitions(input: &str) -> Result<Vec<TermDefinition>, CorpusError> {
    if input.trim().is_empty() {
        return Ok(Vec::new());
    }
    let entries: Vec<&RawValue> = serde_json::from_str(input).map_err(|e| CorpusError::Parse {
        line: e.line(),
        message: cause(&e),
    })?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(entries.len());
    for entry in entries {
        let line = line_of(input, entry.get());
        let defn: TermDefinition =
            serde_json::from_str(entry.get()).map_err(|e| CorpusError::Parse {
                line,
                message: cause(&e),
            })?;
        if !seen.insert(defn.term.clone()) {
            return Err(CorpusError::DuplicateDefinition {
                term: defn.term,
                line,
            });
        }
        out.push(defn);
    }
    Ok(out)
}

/// Writes definitions back out in the file format accepted by [`parse_definitions`].
pub fn serialize_definitions(defs: &[TermDefinition]) -> String {
    let raw: Vec<RawDefinition> = defs
        .iter()
        .map(|d| RawDefinition {
            term: d.term.clone(),
            keywords: d.body_keywords.clone(),
        })
        .collect();
    serde_json::to_string_pretty(&raw).expect("definitions serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QaRecord {
    pub question: String,
    pub answer_keywords: Vec<String>,
}

impl From<&Transaction> for QaRecord {
    fn from(txn: &Transaction) -> Self {
        QaRecord {
            question: txn.target.clone(),
            answer_keywords: txn.prerequisites.clone(),
        }
    }
}

/// Parses a JSON Lines Q&A log. Blank lines are skipped; `index` in errors is
/// the 1-based line number of the bad record.
pub fn parse_qa_log(input: &str) -> Result<Vec<Transaction>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let index = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: QaRecord = serde_json::from_str(line).map_err(|e| CorpusError::Record {
            index,
            message: e.to_string(),
        })?;
        let txn = Transaction::qa(&record.question, &record.answer_keywords).map_err(|e| {
            CorpusError::Record {
                index,
                message: e.to_string(),
            }
        })?;
        out.push(txn);
    }
    Ok(out)
}

pub fn serialize_qa_log(txns: &[Transaction]) -> String {
    let mut out = String::new();
    for txn in txns {
        out.push_str(&serde_json::to_string(&QaRecord::from(txn)).expect("qa record serializes"));
        out.push('\n');
    }
    out
}

/// The term set S of a lecture: every target and prerequisite seen.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: BTreeSet<String>,
}

impl Vocabulary {
    pub fn from_transactions<'a>(txns: impl IntoIterator<Item = &'a Transaction>) -> Self {
        let mut vocab = Vocabulary::default();
        for txn in txns {
            for term in txn.sequence() {
                vocab.terms.insert(term.to_string());
            }
        }
        vocab
    }

    pub fn insert(&mut self, raw: &str) -> Result<bool, CorpusError> {
        Ok(self.terms.insert(normalize_term(raw)?))
    }

    pub fn contains(&self, term: &str) -> bool {
        self.terms.contains(term)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(String::as_str)
    }
}
