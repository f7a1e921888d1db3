use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{EdgeStats, FpGraph, GraphError, TermNode};
use crate::corpus::{normalize_term, QaRecord, Transaction};
use crate::ROOT;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub term: String,
    pub data_list: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub frequency: u64,
    pub association: bool,
}

/// Serialized form of an [`FpGraph`]. Nodes and edges are sorted so the
/// JSON text is byte-stable; the unmatched log keeps arrival order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub sigma: u64,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub unmatched: Vec<QaRecord>,
}

impl Snapshot {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("snapshot serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Validation(e.to_string()))
    }
}

fn check_term(term: &str, what: &str) -> Result<(), GraphError> {
    match normalize_term(term) {
        Ok(n) if n == term => Ok(()),
        _ => Err(GraphError::Validation(format!(
            "{what} {term:?} is not a normalized term"
        ))),
    }
}

impl FpGraph {
    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            sigma: self.sigma,
            nodes: self
                .nodes
                .values()
                .map(|n| NodeDoc {
                    term: n.term.clone(),
                    data_list: n.data_list.iter().cloned().collect(),
                })
                .collect(),
            edges: self
                .edges
                .values()
                .map(|e| EdgeDoc {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    frequency: e.frequency,
                    association: e.is_association,
                })
                .collect(),
            unmatched: self.unmatched.iter().map(QaRecord::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.snapshot().to_json()
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        Self::restore(&Snapshot::from_json(text)?)
    }

    /// Rebuilds a graph from a snapshot, checking every structural invariant.
    pub fn restore(doc: &Snapshot) -> Result<Self, GraphError> {
        let mut graph = FpGraph::new(doc.sigma).map_err(|_| {
            GraphError::Validation(format!("sigma must be >= 1, got {}", doc.sigma))
        })?;
        graph.nodes.clear();

        for node in &doc.nodes {
            check_term(&node.term, "node")?;
            let mut data_list = BTreeSet::new();
            for member in &node.data_list {
                check_term(member, "data list entry")?;
                if member == &node.term {
                    return Err(GraphError::Validation(format!(
                        "node {:?} lists itself in its data list",
                        node.term
                    )));
                }
                data_list.insert(member.clone());
            }
            if node.term == ROOT && !data_list.is_empty() {
                return Err(GraphError::Validation(
                    "root node has a non-empty data list".into(),
                ));
            }
            let previous = graph.nodes.insert(
                node.term.clone(),
                TermNode {
                    term: node.term.clone(),
                    data_list,
                },
            );
            if previous.is_some() {
                return Err(GraphError::Validation(format!(
                    "duplicate node {:?}",
                    node.term
                )));
            }
        }
        if !graph.nodes.contains_key(ROOT) {
            return Err(GraphError::Validation("missing root node".into()));
        }
        for node in graph.nodes.values() {
            if let Some(missing) = node
                .data_list
                .iter()
                .find(|m| !graph.nodes.contains_key(*m))
            {
                return Err(GraphError::Validation(format!(
                    "node {:?} has data list entry {missing:?} that is not a node",
                    node.term
                )));
            }
        }

        let mut edges = BTreeMap::new();
        let mut incoming: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for edge in &doc.edges {
            let name = format!("edge {:?} -> {:?}", edge.from, edge.to);
            for end in [&edge.from, &edge.to] {
                if !graph.nodes.contains_key(end) {
                    return Err(GraphError::Validation(format!(
                        "{name} references missing node {end:?}"
                    )));
                }
            }
            if edge.from == edge.to {
                return Err(GraphError::Validation(format!("{name} is a self-loop")));
            }
            if edge.to == ROOT {
                return Err(GraphError::Validation(format!(
                    "{name} points into the root"
                )));
            }
            if edge.frequency < 1 {
                return Err(GraphError::Validation(format!("{name} has frequency 0")));
            }
            let key = (edge.from.clone(), edge.to.clone());
            let stats = EdgeStats {
                from: edge.from.clone(),
                to: edge.to.clone(),
                frequency: edge.frequency,
                is_association: edge.association,
            };
            if edges.insert(key, stats).is_some() {
                return Err(GraphError::Validation(format!("duplicate {name}")));
            }
            incoming
                .entry(edge.to.clone())
                .or_default()
                .insert(edge.from.clone());
        }
        graph.edges = edges;
        graph.incoming = incoming;

        let reachable = graph.reachable_from_root();
        if let Some(orphan) = graph.nodes.keys().find(|t| !reachable.contains(t.as_str())) {
            return Err(GraphError::Validation(format!(
                "node {orphan:?} is not reachable from the root"
            )));
        }

        for (i, record) in doc.unmatched.iter().enumerate() {
            let txn = Transaction::qa(&record.question, &record.answer_keywords)
                .map_err(|e| GraphError::Validation(format!("unmatched[{i}]: {e}")))?;
            graph.unmatched.push(txn);
        }
        Ok(graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgraph::tests::two_branch;

    #[test]
    fn two_branch_round_trips() {
        let mut g = two_branch();
        g.apply_qa_transaction(&Transaction::qa("a", &["x", "y"]).unwrap())
            .unwrap();
        g.promote_associations();
        let text = g.to_json();
        let back = FpGraph::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn empty_graph_round_trips() {
        let g = FpGraph::new(2).unwrap();
        let back = FpGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.node_count(), 1);
        assert_eq!(back, g);
    }

    #[test]
    fn dangling_edge_is_named() {
        let mut doc = two_branch().snapshot();
        doc.edges.push(EdgeDoc {
            from: "a".into(),
            to: "nowhere".into(),
            frequency: 1,
            association: false,
        });
        let err = FpGraph::restore(&doc).unwrap_err().to_string();
        assert!(err.contains("nowhere"), "{err}");
    }

    #[test]
    fn zero_frequency_and_schema_errors() {
        let mut doc = two_branch().snapshot();
        doc.edges[0].frequency = 0;
        assert!(FpGraph::restore(&doc)
            .unwrap_err()
            .to_string()
            .contains("frequency 0"));

        assert!(FpGraph::from_json(r#"{"sigma": 1, "nodes": []}"#).is_err());
        assert!(FpGraph::from_json(r#"{"sigma": 0, "nodes": [], "edges": []}"#).is_err());
        assert!(FpGraph::from_json(
            r#"{"sigma": 1, "nodes": [{"term": "root-sentinel", "data_list": []}, {"term": "x", "data_list": []}], "edges": []}"#
        )
        .unwrap_err()
        .to_string()
        .contains("not reachable"));
    }
}
