use std::fmt::Write;

use super::FpGraph;
use crate::ROOT;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders the graph in DOT. Edges carry their frequency as label;
/// associations are drawn bold.
pub fn to_dot(graph: &FpGraph) -> String {
    let mut out = String::from("digraph fpgraph {\n    rankdir=LR;\n");
    for term in graph.terms() {
        if term == ROOT {
            let _ = writeln!(
                out,
                "    {} [label=\"Root\", shape=doublecircle];",
                quote(term)
            );
        } else {
            let _ = writeln!(out, "    {};", quote(term));
        }
    }
    for edge in graph.edges() {
        let style = if edge.is_association {
            ", style=bold"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "    {} -> {} [label=\"{}\"{}];",
            quote(&edge.from),
            quote(&edge.to),
            edge.frequency,
            style
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Transaction;

    #[test]
    fn single_branch_renders_five_nodes_four_edges() {
        let mut g = FpGraph::new(3).unwrap();
        g.insert_branch(&Transaction::definition("a", &["b", "c", "d"]).unwrap())
            .unwrap();
        let dot = to_dot(&g);
        assert_eq!(
            dot.lines()
                .filter(|l| l.ends_with(';') && !l.contains("->") && !l.contains("rankdir"))
                .count(),
            5
        );
        assert_eq!(dot.matches("[label=\"1\"]").count(), 4);
        assert!(dot.contains("\"root-sentinel\" -> \"b\""));
        assert_eq!(dot, to_dot(&g));
    }

    #[test]
    fn empty_graph_has_only_root() {
        let dot = to_dot(&FpGraph::new(1).unwrap());
        assert!(dot.contains("label=\"Root\""));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn association_is_bold() {
        let mut g = FpGraph::new(5).unwrap();
        g.insert_branch(&Transaction::definition("cell nucleus", &["cell"]).unwrap())
            .unwrap();
        g.promote_associations();
        let dot = to_dot(&g);
        assert!(dot.contains("\"cell\" -> \"cell nucleus\" [label=\"1\", style=bold];"));
        assert!(dot.contains("\"root-sentinel\" -> \"cell\" [label=\"1\"];"));
    }
}
