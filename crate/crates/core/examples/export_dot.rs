//! Prints the bundled case-study graph as Graphviz DOT.
//!
//! ```sh
//! cargo run --example export_dot | dot -Tsvg > case_study.svg
//! ```

use learning_path::fixtures;
use learning_path::fpgraph::to_dot;

fn main() {
    print!("{}", to_dot(&fixtures::case_study_graph()));
}
