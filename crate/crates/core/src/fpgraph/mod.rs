//! The frequent-pattern graph.
//!
//! Each definition transaction `target: p1, p2, .., pn` becomes a branch
//! `Root -> p1 -> p2 -> .. -> pn -> target`. Branches share nodes wherever
//! they mention the same term, so the structure is a general directed graph
//! rather than a prefix tree. Every prerequisite node remembers which targets
//! it was used to define (its data list); the search uses that list to decide
//! whether an edge can take part in a learning path.
//!
//! Classroom Q&A transactions never grow the graph. They only reinforce edge
//! frequencies along an existing branch (or the longest existing suffix of
//! it), and [`FpGraph::promote_associations`] turns edges whose frequency
//! reached sigma into associations.

mod dot;
mod snapshot;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::corpus::{to_transaction, TermDefinition, Transaction, TransactionKind};
use crate::ROOT;

pub use dot::to_dot;
pub use snapshot::{EdgeDoc, NodeDoc, Snapshot};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("sigma must be at least 1, got {0}")]
    InvalidSigma(u64),
    #[error("unknown term {0:?}")]
    UnknownTerm(String),
    #[error("expected a {expected:?} transaction for {target:?}")]
    WrongKind {
        expected: TransactionKind,
        target: String,
    },
    #[error("invalid snapshot: {0}")]
    Validation(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermNode {
    pub term: String,
    pub data_list: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeStats {
    pub from: String,
    pub to: String,
    pub frequency: u64,
    pub is_association: bool,
}

/// Outcome of crediting one Q&A transaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QaMatch {
    /// The suffix starting at `offset` into the prerequisite list matched;
    /// `offset == 0` means the whole transaction matched.
    Matched {
        offset: usize,
        credited: Vec<(String, String)>,
    },
    /// No suffix matched; the transaction went to the unmatched log.
    Unmatched,
    /// The target is not a node of the graph; nothing was recorded.
    UnknownTarget,
}

impl QaMatch {
    /// Number of terms in the matched sequence, target included.
    pub fn matched_len(&self, txn: &Transaction) -> Option<usize> {
        match self {
            QaMatch::Matched { offset, .. } => Some(txn.prerequisites().len() - offset + 1),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpGraph {
    sigma: u64,
    nodes: BTreeMap<String, TermNode>,
    edges: BTreeMap<(String, String), EdgeStats>,
    // to -> set of from; derived from `edges`
    incoming: BTreeMap<String, BTreeSet<String>>,
    unmatched: Vec<Transaction>,
}

impl FpGraph {
    pub fn new(sigma: u64) -> Result<Self, GraphError> {
        if sigma < 1 {
            return Err(GraphError::InvalidSigma(sigma));
        }
        let mut graph = FpGraph {
            sigma,
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            incoming: BTreeMap::new(),
            unmatched: Vec::new(),
        };
        graph.ensure_node(ROOT);
        Ok(graph)
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    pub fn node(&self, term: &str) -> Option<&TermNode> {
        self.nodes.get(term)
    }

    pub fn contains(&self, term: &str) -> bool {
        self.nodes.contains_key(term)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &TermNode> {
        self.nodes.values()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.nodes.keys().map(String::as_str)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge(&self, from: &str, to: &str) -> Option<&EdgeStats> {
        self.edges.get(&(from.to_string(), to.to_string()))
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeStats> {
        self.edges.values()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn association_count(&self) -> usize {
        self.edges.values().filter(|e| e.is_association).count()
    }

    pub fn unmatched(&self) -> &[Transaction] {
        &self.unmatched
    }

    /// Whether `holder`'s data list contains `target`.
    pub fn data_list_contains(&self, holder: &str, target: &str) -> bool {
        self.nodes
            .get(holder)
            .is_some_and(|n| n.data_list.contains(target))
    }

    pub fn in_degree(&self, term: &str) -> usize {
        self.incoming.get(term).map_or(0, BTreeSet::len)
    }

    pub fn out_degree(&self, term: &str) -> usize {
        self.edges
            .range((term.to_string(), String::new())..)
            .take_while(|((from, _), _)| from == term)
            .count()
    }

    fn ensure_node(&mut self, term: &str) {
        if !self.nodes.contains_key(term) {
            self.nodes.insert(
                term.to_string(),
                TermNode {
                    term: term.to_string(),
                    data_list: BTreeSet::new(),
                },
            );
        }
    }

    fn bump_edge(&mut self, from: &str, to: &str) {
        let key = (from.to_string(), to.to_string());
        match self.edges.get_mut(&key) {
            Some(edge) => edge.frequency += 1,
            None => {
                self.edges.insert(
                    key,
                    EdgeStats {
                        from: from.to_string(),
                        to: to.to_string(),
                        frequency: 1,
                        is_association: false,
                    },
                );
                self.incoming
                    .entry(to.to_string())
                    .or_default()
                    .insert(from.to_string());
            }
        }
    }

    /// Adds the branch `Root -> p1 -> .. -> pn -> target`, creating nodes and
    /// edges as needed and incrementing frequencies of edges already present.
    pub fn insert_branch(&mut self, txn: &Transaction) -> Result<(), GraphError> {
        if txn.kind() != TransactionKind::Definition {
            return Err(GraphError::WrongKind {
                expected: TransactionKind::Definition,
                target: txn.target().to_string(),
            });
        }
        let mut prev = ROOT;
        for term in txn.sequence() {
            self.ensure_node(term);
            self.bump_edge(prev, term);
            prev = term;
        }
        for prereq in txn.prerequisites() {
            if let Some(node) = self.nodes.get_mut(prereq) {
                node.data_list.insert(txn.target().to_string());
            }
        }
        Ok(())
    }

    /// Credits a Q&A transaction to the longest existing suffix of its branch.
    ///
    /// Never creates nodes or edges. A transaction with no prerequisites has
    /// no edge to credit and is logged as unmatched.
    pub fn apply_qa_transaction(&mut self, txn: &Transaction) -> Result<QaMatch, GraphError> {
        if txn.kind() != TransactionKind::QA {
            return Err(GraphError::WrongKind {
                expected: TransactionKind::QA,
                target: txn.target().to_string(),
            });
        }
        if !self.contains(txn.target()) {
            return Ok(QaMatch::UnknownTarget);
        }
        let sequence: Vec<&str> = txn.sequence().collect();
        let n = txn.prerequisites().len();
        for offset in 0..n {
            let suffix = &sequence[offset..];
            let all_present = suffix.windows(2).all(|w| {
                self.edges
                    .contains_key(&(w[0].to_string(), w[1].to_string()))
            });
            if all_present {
                let credited: Vec<(String, String)> = suffix
                    .windows(2)
                    .map(|w| (w[0].to_string(), w[1].to_string()))
                    .collect();
                for key in &credited {
                    if let Some(edge) = self.edges.get_mut(key) {
                        edge.frequency += 1;
                    }
                }
                return Ok(QaMatch::Matched { offset, credited });
            }
        }
        self.unmatched.push(txn.clone());
        Ok(QaMatch::Unmatched)
    }

    /// Marks edges as associations when their frequency reached sigma or when
    /// the source's words are a strict subset of the destination's words.
    /// Returns the newly promoted edges.
    pub fn promote_associations(&mut self) -> Vec<(String, String)> {
        let sigma = self.sigma;
        let mut promoted = Vec::new();
        for (key, edge) in self.edges.iter_mut() {
            if edge.is_association {
                continue;
            }
            if edge.frequency >= sigma || is_word_subset(&edge.from, &edge.to) {
                edge.is_association = true;
                promoted.push(key.clone());
            }
        }
        promoted
    }

    /// In-edges of `term`, ordered by source term.
    pub fn predecessors(&self, term: &str) -> Result<Vec<&EdgeStats>, GraphError> {
        if !self.contains(term) {
            return Err(GraphError::UnknownTerm(term.to_string()));
        }
        Ok(self
            .incoming
            .get(term)
            .into_iter()
            .flatten()
            .filter_map(|from| self.edges.get(&(from.clone(), term.to_string())))
            .collect())
    }

    /// Up to `limit` terms that share the longest prefix with `raw`, for
    /// "did you mean" replies. Root is never suggested.
    pub fn suggest(&self, raw: &str, limit: usize) -> Vec<String> {
        let probe = raw
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
            .to_lowercase();
        let common = |term: &str| {
            term.chars()
                .zip(probe.chars())
                .take_while(|(a, b)| a == b)
                .count()
        };
        let best = self
            .terms()
            .filter(|t| *t != ROOT)
            .map(common)
            .max()
            .unwrap_or(0);
        if best == 0 {
            return Vec::new();
        }
        self.terms()
            .filter(|t| *t != ROOT && common(t) == best)
            .take(limit)
            .map(str::to_string)
            .collect()
    }

    /// Terms reachable from Root along edge direction.
    pub fn reachable_from_root(&self) -> BTreeSet<&str> {
        let mut out_adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for edge in self.edges.values() {
            out_adj.entry(&edge.from).or_default().push(&edge.to);
        }
        let mut seen = BTreeSet::from([ROOT]);
        let mut queue = VecDeque::from([ROOT]);
        while let Some(term) = queue.pop_front() {
            for &next in out_adj.get(term).into_iter().flatten() {
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }
}

/// Inserts every definition as a branch, credits the Q&A log, then promotes
/// associations once. Returns the per-transaction match outcomes.
pub fn build_graph(
    definitions: &[TermDefinition],
    qa_log: &[Transaction],
    sigma: u64,
) -> Result<(FpGraph, Vec<QaMatch>), GraphError> {
    let mut graph = FpGraph::new(sigma)?;
    for defn in definitions {
        graph.insert_branch(&to_transaction(defn))?;
    }
    let matches = qa_log
        .iter()
        .map(|txn| graph.apply_qa_transaction(txn))
        .collect::<Result<Vec<_>, _>>()?;
    graph.promote_associations();
    Ok((graph, matches))
}

/// Strict word-set containment used for the trivial subset -> superset association.
pub fn is_word_subset(from: &str, to: &str) -> bool {
    if from == ROOT || to == ROOT {
        return false;
    }
    let a: BTreeSet<&str> = from.split_whitespace().collect();
    let b: BTreeSet<&str> = to.split_whitespace().collect();
    a.len() < b.len() && a.is_subset(&b)
}
