//! Builds a graph from two definitions and prints its nodes and edges.
//!
//! ```sh
//! cargo run --example build_graph
//! ```

use learning_path::corpus::{parse_definitions, to_transaction};
use learning_path::fpgraph::FpGraph;

fn main() -> anyhow::Result<()> {
    let defs = parse_definitions(
        r#"[
            {"term": "A", "keywords": ["B", "C", "D"]},
            {"term": "G", "keywords": ["E", "F", "C"]}
        ]"#,
    )?;
    let mut graph = FpGraph::new(3)?;
    for d in &defs {
        graph.insert_branch(&to_transaction(d))?;
    }

    for node in graph.nodes() {
        let list: Vec<&str> = node.data_list.iter().map(String::as_str).collect();
        println!("{:<14} data list: [{}]", node.term, list.join(", "));
    }
    for e in graph.edges() {
        println!("{} -> {} (frequency {})", e.from, e.to, e.frequency);
    }
    Ok(())
}
