//! Feeds Q&A answers into a graph and watches an edge become an association.
//!
//! ```sh
//! cargo run --example qa_reinforcement
//! ```

use learning_path::corpus::Transaction;
use learning_path::fpgraph::{FpGraph, QaMatch};

fn main() -> anyhow::Result<()> {
    let mut graph = FpGraph::new(3)?;
    graph.insert_branch(&Transaction::definition("t1", &["t3", "t4"])?)?;
    graph.insert_branch(&Transaction::definition("t5", &["t2"])?)?;

    // t2 -> t3 does not exist, so only the suffix t3 -> t4 -> t1 is credited.
    let answer = Transaction::qa("t1", &["t2", "t3", "t4"])?;
    for round in 1..=3 {
        let outcome = graph.apply_qa_transaction(&answer)?;
        let promoted = graph.promote_associations();
        let edge = graph.edge("t4", "t1").expect("edge exists");
        println!(
            "round {round}: {outcome:?}, t4 -> t1 frequency {} association {}, newly promoted {promoted:?}",
            edge.frequency, edge.is_association
        );
    }

    let stray = graph.apply_qa_transaction(&Transaction::qa("t1", &["t5"])?)?;
    assert_eq!(stray, QaMatch::Unmatched);
    println!("unmatched log: {} record(s)", graph.unmatched().len());
    Ok(())
}
