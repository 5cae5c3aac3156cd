use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::IdealGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub d: u64,
    pub exponents: Vec<u32>,
    /// One-based prime indices carried with full exponent.
    pub xi: Vec<usize>,
    pub essential: bool,
    pub degree: usize,
}

/// JSON form of an ideal graph. Edges index into `vertices`, `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: u64,
    pub factors: Vec<[u64; 2]>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&IdealGraph> for GraphJson {
    fn from(g: &IdealGraph) -> Self {
        GraphJson {
            n: g.n(),
            factors: g.factored().factors().iter().map(|&(p, m)| [p, u64::from(m)]).collect(),
            vertices: g
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| VertexJson {
                    d: v.generator(),
                    exponents: v.exponents().to_vec(),
                    xi: v.xi().iter().map(|i| i + 1).collect(),
                    essential: v.is_essential(),
                    degree: g.degree(i),
                })
                .collect(),
            edges: g.graph().edges().map(|(a, b)| [a, b]).collect(),
        }
    }
}

pub fn to_json(g: &IdealGraph) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph JSON serializes")
}

/// Graphviz rendering: nodes labelled by generator, graph comment holding
/// `n` and its factorization.
pub fn to_dot(g: &IdealGraph) -> String {
    let name = match g.kind() {
        super::GraphKind::Annihilating => "AIG",
        _ => "E",
    };
    let mut out = String::new();
    writeln!(out, "graph {name}_Z{} {{", g.n()).unwrap();
    writeln!(
        out,
        "  graph [comment=\"n={} factorization={}\"];",
        g.n(),
        g.factored().pretty()
    )
    .unwrap();
    for (i, v) in g.vertices().iter().enumerate() {
        writeln!(out, "  {i} [label=\"{}\"];", v.generator()).unwrap();
    }
    for (a, b) in g.graph().edges() {
        writeln!(out, "  {a} -- {b};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{factor, Caps};
    use crate::graph::build_essential_graph;

    #[test]
    fn dot_for_12() {
        let g = build_essential_graph(&factor(12).unwrap(), &Caps::default()).unwrap();
        let dot = to_dot(&g);
        assert!(dot.starts_with("graph E_Z12 {\n  graph [comment=\"n=12 factorization=2^2 * 3\"];\n"));
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.contains("  0 -- 1;\n"));
    }

    #[test]
    fn json_round_trip() {
        let g = build_essential_graph(&factor(210).unwrap(), &Caps::default()).unwrap();
        let parsed: GraphJson = serde_json::from_str(&to_json(&g)).unwrap();
        assert_eq!(parsed.n, 210);
        assert_eq!(parsed.vertices.len(), 14);
        assert_eq!(parsed.edges.len(), 25);
        assert!(parsed.edges.iter().all(|e| e[0] < e[1]));
        assert_eq!(parsed.vertices[0].d, 2);
        assert_eq!(parsed.vertices[0].xi, vec![1]);
        assert_eq!(parsed.vertices[0].degree, 7);
    }
}
