use std::fmt::Write;

use super::{EventKind, TLGraph};

/// Renders the graph as a Graphviz digraph named `tlg`.
///
/// Edges into a retrocausal copy are dashed (the alternative timeline); all
/// other causal edges are solid. Each entanglement class is drawn as a chain
/// of undirected dotted edges with `constraint=false`. Nodes and edges are
/// emitted in ascending id order, so the output is byte-stable.
pub fn to_dot(tlg: &TLGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph tlg {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");

    for node in tlg.nodes() {
        let label = match node.copy_of {
            Some(orig) => format!("{}\\n{} (copy of {orig})", node.id, node.kind),
            None => format!("{}\\n{}", node.id, node.kind),
        };
        let _ = write!(out, "  {} [label=\"{label}\"", node.id);
        if let Some(color) = kind_color(node.kind) {
            let _ = write!(out, ", color={color}");
        }
        out.push_str("];\n");
    }

    for &(a, b) in tlg.edges() {
        let style = if tlg.node(b).is_some_and(|n| n.copy_of.is_some()) {
            "dashed"
        } else {
            "solid"
        };
        let _ = writeln!(out, "  {a} -> {b} [style={style}];");
    }

    for class in tlg.entanglement().entangled_classes() {
        for pair in class.windows(2) {
            let color = tlg
                .node(pair[0])
                .and_then(|n| kind_color(n.kind))
                .unwrap_or("gray");
            let _ = writeln!(
                out,
                "  {} -> {} [dir=none, style=dotted, constraint=false, color={color}];",
                pair[0], pair[1]
            );
        }
    }

    out.push_str("}\n");
    out
}

fn kind_color(kind: EventKind) -> Option<&'static str> {
    match kind {
        EventKind::CChoice => Some("red"),
        EventKind::Outcome => Some("blue"),
        _ => None,
    }
}
