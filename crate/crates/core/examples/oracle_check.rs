//! Compares the colony with exhaustive enumeration on the bundled corpus.
//!
//! ```sh
//! cargo run --example oracle_check
//! ```

use std::collections::BTreeSet;

use learning_path::aco::{learning_path, oracle_report, AcoParams, TargetGate};
use learning_path::fixtures;
use learning_path::ROOT;

fn main() -> anyhow::Result<()> {
    let graph = fixtures::case_study_graph();
    let known = BTreeSet::new();
    for term in graph.terms().filter(|t| *t != ROOT) {
        let colony = learning_path(&graph, term, &known, &AcoParams::default());
        let oracle = oracle_report(&graph, term, &known, TargetGate::Query);
        match (colony, oracle) {
            (Ok(c), Ok(o)) => {
                let verdict = if c.path == o.path.path {
                    "same"
                } else {
                    "differs"
                };
                println!(
                    "{term:<17} colony {}a/{} oracle {}a/{} ({} optimal of {} walks) {verdict}",
                    c.association_count,
                    c.path.len(),
                    o.path.association_count,
                    o.path.path.len(),
                    o.optimal_walks,
                    o.complete_walks,
                );
            }
            (c, o) => println!("{term:<17} colony {:?} oracle {:?}", c.err(), o.err()),
        }
    }
    Ok(())
}
