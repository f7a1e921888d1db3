//! Runs the colony on the bundled biology corpus.
//!
//! ```sh
//! cargo run --example case_study -- [seed]
//! ```

use std::collections::BTreeSet;

use learning_path::aco::{learning_path, AcoParams};
use learning_path::fixtures;

fn main() -> anyhow::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(0);
    let graph = fixtures::case_study_graph();
    let params = AcoParams {
        seed,
        ..AcoParams::default()
    };
    for query in ["mitochondria", "eukaryotic"] {
        let lp = learning_path(&graph, query, &BTreeSet::new(), &params)?;
        println!(
            "{query}: recommended {:?} ({} associations, {} iterations)",
            lp.recommended_terms, lp.association_count, lp.iterations_run
        );
    }

    let known = BTreeSet::from(["cell".to_string()]);
    let lp = learning_path(&graph, "dna", &known, &params)?;
    println!("dna, knowing cell: {}", lp.path.join(" -> "));
    Ok(())
}
