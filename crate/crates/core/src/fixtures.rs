//! Bundled example corpora.
//!
//! The case study is a small biology vocabulary (cell, DNA, mitochondria, ...)
//! with a handful of classroom Q&A answers; `fixtures/case_study/README.md`
//! describes how it was assembled.

use crate::corpus::{parse_definitions, parse_qa_log};
use crate::fpgraph::FpGraph;

pub const CASE_STUDY_DEFINITIONS: &str = include_str!("../fixtures/case_study/definitions.json");
pub const CASE_STUDY_QA_LOG: &str = include_str!("../fixtures/case_study/qa_log.jsonl");
pub const CASE_STUDY_SNAPSHOT: &str = include_str!("../fixtures/case_study/snapshot.json");
pub const CASE_STUDY_SIGMA: u64 = 3;

/// The two-branch example: `A` defined by `B, C, D`, then `G` by `E, F, C`.
pub const TWO_BRANCH_DEFINITIONS: &str = include_str!("../fixtures/two_branch/definitions.json");

/// The bundled case-study graph, loaded from its snapshot.
pub fn case_study_graph() -> FpGraph {
    FpGraph::from_json(CASE_STUDY_SNAPSHOT).expect("bundled snapshot is valid")
}

/// Rebuilds the case-study graph from its definitions and Q&A log.
pub fn build_case_study() -> FpGraph {
    let defs = parse_definitions(CASE_STUDY_DEFINITIONS).expect("bundled definitions parse");
    let qa = parse_qa_log(CASE_STUDY_QA_LOG).expect("bundled log parses");
    let (graph, _) =
        crate::fpgraph::build_graph(&defs, &qa, CASE_STUDY_SIGMA).expect("bundled corpus builds");
    graph
}

pub fn two_branch_graph() -> FpGraph {
    let defs = parse_definitions(TWO_BRANCH_DEFINITIONS).expect("bundled definitions parse");
    let (graph, _) = crate::fpgraph::build_graph(&defs, &[], 3).expect("bundled corpus builds");
    graph
}
