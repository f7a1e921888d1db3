//! Random graph fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use learning_path::corpus::{to_transaction, TermDefinition};
use learning_path::fpgraph::FpGraph;
use learning_path::ROOT;
use rand::seq::SliceRandom;
use rand::Rng;

pub const MAX_NODES: usize = 12;
pub const MAX_EDGES: usize = 20;

/// Includes multi-word terms whose words are also terms, so the subset rule fires.
const WORDS: &[&str] = &[
    "cell",
    "cell wall",
    "wall",
    "gene",
    "gene pool",
    "pool",
    "acid",
    "amino acid",
    "base",
    "enzyme",
    "lipid",
    "membrane",
    "protein",
    "sugar",
    "water",
    "energy",
];

#[derive(Debug, Clone)]
pub struct Fixture {
    pub graph: FpGraph,
    pub query: String,
    pub known: BTreeSet<String>,
}

/// Random definitions over a small vocabulary; the graph they build has at
/// most `MAX_NODES` nodes (Root included) and `MAX_EDGES` edges.
pub fn random_definitions<R: Rng>(rng: &mut R) -> Vec<TermDefinition> {
    let vocab_size = rng.gen_range(3..MAX_NODES);
    let vocab: Vec<&str> = WORDS.choose_multiple(rng, vocab_size).copied().collect();
    let mut graph = FpGraph::new(1).unwrap();
    let mut defs: Vec<TermDefinition> = Vec::new();
    for _ in 0..12 {
        let target = *vocab.choose(rng).unwrap();
        if defs.iter().any(|d| d.term == target) {
            continue;
        }
        let others: Vec<&str> = vocab.iter().copied().filter(|t| *t != target).collect();
        let n = rng.gen_range(1..=others.len().min(4));
        let keywords: Vec<&str> = others.choose_multiple(rng, n).copied().collect();
        let defn = TermDefinition::new(target, &keywords).unwrap();
        let mut trial = graph.clone();
        trial.insert_branch(&to_transaction(&defn)).unwrap();
        if trial.edge_count() <= MAX_EDGES && trial.node_count() <= MAX_NODES {
            graph = trial;
            defs.push(defn);
        }
    }
    if defs.is_empty() {
        defs.push(TermDefinition::new(vocab[0], &[vocab[1]]).unwrap());
    }
    defs
}

/// A connected graph with random frequencies in 1..=5 and a random sigma in
/// 1..=5, plus a query and an optional known term.
pub fn random_fixture<R: Rng>(rng: &mut R) -> Fixture {
    let defs = random_definitions(rng);
    let mut graph = FpGraph::new(1).unwrap();
    for d in &defs {
        graph.insert_branch(&to_transaction(d)).unwrap();
    }
    let mut doc = graph.snapshot();
    doc.sigma = rng.gen_range(1..=5);
    for edge in &mut doc.edges {
        edge.frequency = rng.gen_range(1..=5);
        edge.association = false;
    }
    let mut graph = FpGraph::restore(&doc).unwrap();
    graph.promote_associations();

    let terms: Vec<String> = graph
        .terms()
        .filter(|t| *t != ROOT)
        .map(String::from)
        .collect();
    let query = terms.choose(rng).unwrap().clone();
    let mut known = BTreeSet::new();
    if terms.len() > 1 && rng.gen_bool(0.3) {
        let pick = terms.iter().filter(|t| **t != query).collect::<Vec<_>>();
        known.insert((*pick.choose(rng).unwrap()).clone());
    }
    Fixture {
        graph,
        query,
        known,
    }
}
