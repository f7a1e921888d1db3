//! The bundled biology corpus end to end.

use std::collections::BTreeSet;

use learning_path::aco::{self, brute_force_oracle, AcoParams, TargetGate};
use learning_path::corpus::{parse_definitions, parse_qa_log};
use learning_path::fixtures;
use learning_path::fpgraph::{build_graph, QaMatch};
use learning_path::ROOT;

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn params(seed: u64) -> AcoParams {
    AcoParams {
        seed,
        ..AcoParams::default()
    }
}

#[test]
fn snapshot_is_a_fresh_build() {
    assert_eq!(
        fixtures::build_case_study().to_json(),
        fixtures::CASE_STUDY_SNAPSHOT
    );
}

#[test]
fn qa_log_outcomes() {
    let defs = parse_definitions(fixtures::CASE_STUDY_DEFINITIONS).unwrap();
    let qa = parse_qa_log(fixtures::CASE_STUDY_QA_LOG).unwrap();
    let (graph, outcomes) = build_graph(&defs, &qa, fixtures::CASE_STUDY_SIGMA).unwrap();
    let unmatched: Vec<&str> = qa
        .iter()
        .zip(&outcomes)
        .filter(|(_, o)| **o == QaMatch::Unmatched)
        .map(|(t, _)| t.target())
        .collect();
    assert_eq!(unmatched, vec!["dna", "nucleotide"]);
    assert!(!outcomes.contains(&QaMatch::UnknownTarget));
    assert_eq!(graph.unmatched().len(), 2);
}

#[test]
fn associations_follow_the_reinforced_answers() {
    let g = fixtures::case_study_graph();
    let associations: BTreeSet<(String, String)> = g
        .edges()
        .filter(|e| e.is_association)
        .map(|e| (e.from.clone(), e.to.clone()))
        .collect();
    let expected: BTreeSet<(String, String)> = [
        (ROOT, "cell"),
        ("cell", "eukaryotic"),
        ("eukaryotic", "organelle"),
        ("organelle", "atp"),
        ("atp", "mitochondria"),
        ("cell", "metabolism"),
        ("metabolism", "nucleus"),
        ("nucleus", "organelle"),
        ("organelle", "eukaryotic"),
        ("cell", "dna"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    assert!(expected.is_subset(&associations), "{associations:?}");
    for (from, to) in &associations {
        assert!(g.edge(from, to).unwrap().frequency >= fixtures::CASE_STUDY_SIGMA);
    }
}

#[test]
fn mitochondria_path() {
    let g = fixtures::case_study_graph();
    for seed in [0, 7, 123, u64::MAX] {
        let lp = aco::learning_path(&g, "mitochondria", &BTreeSet::new(), &params(seed)).unwrap();
        assert_eq!(
            lp.path,
            vec![
                ROOT,
                "cell",
                "eukaryotic",
                "organelle",
                "atp",
                "mitochondria"
            ]
        );
        assert_eq!(lp.association_count, 5);
    }
}

#[test]
fn eukaryotic_path() {
    let g = fixtures::case_study_graph();
    for seed in [0, 7, 123, u64::MAX] {
        let lp = aco::learning_path(&g, "eukaryotic", &BTreeSet::new(), &params(seed)).unwrap();
        assert_eq!(
            lp.recommended_set(),
            ["cell", "metabolism", "nucleus", "organelle"].into()
        );
    }
}

#[test]
fn oracle_agrees_on_both_queries() {
    let g = fixtures::case_study_graph();
    for query in ["mitochondria", "eukaryotic"] {
        let colony = aco::learning_path(&g, query, &BTreeSet::new(), &params(1)).unwrap();
        let oracle = brute_force_oracle(&g, query, &BTreeSet::new(), TargetGate::Query).unwrap();
        assert_eq!(colony.path, oracle.path);
    }
}

#[test]
fn known_cell_shortens_dna() {
    let g = fixtures::case_study_graph();
    let lp = aco::learning_path(&g, "dna", &set(&["cell"]), &params(0)).unwrap();
    assert_eq!(lp.path, vec!["cell", "dna"]);
    assert!(!lp.reached_root());
}

#[test]
fn current_node_gate_cannot_reach_the_recommendations() {
    // Under the alternative gate a step from t needs a predecessor that
    // appears in t's definition. atp has no definition, so no walk passes
    // through it.
    let g = fixtures::case_study_graph();
    let p = AcoParams {
        gate: TargetGate::CurrentNode,
        ..params(0)
    };
    let got = aco::learning_path(&g, "mitochondria", &BTreeSet::new(), &p).map(|lp| {
        lp.recommended_set()
            .into_iter()
            .map(String::from)
            .collect::<BTreeSet<_>>()
    });
    assert_ne!(
        got.ok(),
        Some(set(&["atp", "cell", "eukaryotic", "organelle"]))
    );
}
