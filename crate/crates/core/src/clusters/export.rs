use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use super::{exchange_two_faces, ClusterComplex, ExchangeGraph, SeedMode, TwoFaces};
use crate::folding::IsoConvention;

/// Index of each vertex's folded-quiver class, numbered by first appearance.
fn quiver_classes(g: &ExchangeGraph) -> (Vec<usize>, usize) {
    let mut ids = HashMap::new();
    let classes = g
        .seeds()
        .iter()
        .map(|s| {
            let next = ids.len();
            *ids.entry(s.folded().canonical_key_with(IsoConvention::GroupPermuting)).or_insert(next)
        })
        .collect();
    (classes, ids.len())
}

/// Graphviz rendering; vertices coloured by folded-quiver class, edges
/// labelled by the (1-based) mutated group.
pub fn to_dot(g: &ExchangeGraph) -> String {
    let (classes, count) = quiver_classes(g);
    let mut out = String::from("graph exchange {\n  node [style=filled, shape=circle];\n");
    for (v, &c) in classes.iter().enumerate() {
        let hue = c as f64 / count.max(1) as f64;
        writeln!(out, "  {v} [fillcolor=\"{hue:.3} 0.45 0.95\", tooltip=\"class {c}\"];").unwrap();
    }
    for (u, h, v) in g.edges() {
        writeln!(out, "  {u} -- {v} [label=\"{}\"];", h + 1).unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexJson {
    pub id: usize,
    pub depth: usize,
    pub quiver_class: usize,
    pub variables: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeJson {
    pub source: usize,
    pub target: usize,
    pub group: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExchangeGraphJson {
    pub mode: SeedMode,
    pub exhausted: bool,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ClusterComplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_faces: Option<TwoFaces>,
}

/// Serializable view; complex data is included when the graph is exhausted.
pub fn to_json(g: &ExchangeGraph) -> ExchangeGraphJson {
    let (classes, _) = quiver_classes(g);
    let vertices = (0..g.len())
        .map(|v| VertexJson {
            id: v,
            depth: g.depth(v),
            quiver_class: classes[v],
            variables: g.seed(v).vars().iter().map(|x| x.to_string()).collect(),
        })
        .collect();
    let edges = g.edges().into_iter().map(|(u, h, v)| EdgeJson { source: u, target: v, group: h + 1 }).collect();
    ExchangeGraphJson {
        mode: g.mode(),
        exhausted: g.is_exhausted(),
        vertices,
        edges,
        complex: super::cluster_complex(g).ok(),
        two_faces: exchange_two_faces(g).ok(),
    }
}
