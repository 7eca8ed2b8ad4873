//! Cluster complex of an exhausted exchange graph.
//!
//! A complex vertex is the multiset of variables carried by one unfrozen
//! group in some seed; for cluster foldings this is just the group's cluster
//! variable. Each seed contributes one facet.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::{var_hash, ClusterError, ExchangeGraph};
use crate::symalg::RationalFunction;

#[derive(Clone, Debug)]
pub struct Census {
    /// Distinct complex vertices, in order of first appearance.
    pub vertices: Vec<Vec<RationalFunction>>,
    pub clusters: usize,
    /// Every seed has one neighbour per unfrozen group.
    pub regular: bool,
    /// Variables of frozen nodes, which never change.
    pub frozen: Vec<RationalFunction>,
}

impl Census {
    pub fn variables(&self) -> usize {
        self.vertices.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterComplex {
    pub num_vertices: usize,
    /// Vertex ids of each facet, sorted; indexed like the exchange graph.
    pub facets: Vec<Vec<usize>>,
    /// `f_vector[d]` counts faces with `d + 1` vertices.
    pub f_vector: Vec<usize>,
    /// Every facet has one distinct vertex per unfrozen group.
    pub facets_full: bool,
    /// Facets sharing all but one vertex are exactly the exchange-graph edges.
    pub dual_graph_matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoFaces {
    /// Polygon size to number of polygons.
    pub histogram: BTreeMap<usize, usize>,
    pub total: usize,
    /// Facets around every codimension-2 face form a single cycle.
    pub all_cycles: bool,
}

fn multiset(vars: Vec<RationalFunction>) -> Vec<RationalFunction> {
    let mut keyed: Vec<(u64, RationalFunction)> = vars.into_iter().map(|v| (var_hash(&v), v)).collect();
    keyed.sort_by(|a, b| match a.0.cmp(&b.0) {
        Ordering::Equal => a.1.to_string().cmp(&b.1.to_string()),
        o => o,
    });
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Vertex id of every (seed, unfrozen group) together with the vertex list.
fn label(g: &ExchangeGraph) -> (Vec<Vec<RationalFunction>>, Vec<Vec<usize>>) {
    let unfrozen = g.unfrozen_groups();
    let mut ids: HashMap<Vec<RationalFunction>, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut per_seed = Vec::with_capacity(g.len());
    for s in g.seeds() {
        let gv = s.group_vars();
        let row = unfrozen
            .iter()
            .map(|&h| {
                let m = multiset(gv[h].clone());
                *ids.entry(m.clone()).or_insert_with(|| {
                    vertices.push(m);
                    vertices.len() - 1
                })
            })
            .collect();
        per_seed.push(row);
    }
    (vertices, per_seed)
}

pub fn cluster_variable_census(g: &ExchangeGraph) -> Result<Census, ClusterError> {
    if !g.is_exhausted() {
        return Err(ClusterError::GraphNotExhausted);
    }
    let (vertices, _) = label(g);
    let base = g.base();
    let frozen = base.folded().frozen_groups().iter().map(|&h| base.group_var(h).clone()).collect();
    Ok(Census { vertices, clusters: g.len(), regular: g.is_regular(), frozen })
}

pub fn cluster_complex(g: &ExchangeGraph) -> Result<ClusterComplex, ClusterError> {
    if !g.is_exhausted() {
        return Err(ClusterError::GraphNotExhausted);
    }
    let (vertices, per_seed) = label(g);
    let k = g.unfrozen_groups().len();
    let facets: Vec<Vec<usize>> = per_seed
        .into_iter()
        .map(|mut f| {
            f.sort_unstable();
            f.dedup();
            f
        })
        .collect();
    let facets_full = facets.iter().all(|f| f.len() == k);

    let mut faces: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); k];
    for f in &facets {
        for mask in 1u64..(1 << f.len()) {
            let face: Vec<usize> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            faces[face.len() - 1].insert(face);
        }
    }
    let f_vector = faces.iter().map(HashSet::len).collect();

    let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (v, f) in facets.iter().enumerate() {
        for skip in 0..f.len() {
            let mut r = f.clone();
            r.remove(skip);
            ridges.entry(r).or_default().push(v);
        }
    }
    let mut from_ridges = HashSet::new();
    let mut pseudomanifold = true;
    for owners in ridges.values() {
        if owners.len() == 2 {
            from_ridges.insert((owners[0].min(owners[1]), owners[0].max(owners[1])));
        } else {
            pseudomanifold = false;
        }
    }
    let from_graph: HashSet<(usize, usize)> = g.edges().into_iter().map(|(u, _, v)| (u, v)).collect();
    let dual_graph_matches = facets_full && pseudomanifold && from_ridges == from_graph;

    Ok(ClusterComplex { num_vertices: vertices.len(), facets, f_vector, facets_full, dual_graph_matches })
}

/// Polygons of the exchange complex: for every face of codimension 2 the
/// cycle of facets containing it.
pub fn exchange_two_faces(g: &ExchangeGraph) -> Result<TwoFaces, ClusterError> {
    let k = g.unfrozen_groups().len();
    if k < 2 {
        return Err(ClusterError::NotEnoughGroups);
    }
    let complex = cluster_complex(g)?;
    let mut around: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (v, f) in complex.facets.iter().enumerate() {
        for a in 0..f.len() {
            for b in (a + 1)..f.len() {
                let s: Vec<usize> = (0..f.len()).filter(|&i| i != a && i != b).map(|i| f[i]).collect();
                around.entry(s).or_default().push(v);
            }
        }
    }
    let mut histogram = BTreeMap::new();
    let mut all_cycles = complex.facets_full;
    for members in around.values() {
        *histogram.entry(members.len()).or_insert(0) += 1;
        all_cycles &= is_cycle(g, members);
    }
    Ok(TwoFaces { total: around.len(), histogram, all_cycles })
}

fn is_cycle(g: &ExchangeGraph, members: &[usize]) -> bool {
    let inside: HashSet<usize> = members.iter().copied().collect();
    let adj = |v: usize| -> Vec<usize> {
        let mut n: Vec<usize> = g.neighbors(v).iter().flatten().copied().filter(|u| inside.contains(u)).collect();
        n.sort_unstable();
        n.dedup();
        n
    };
    if members.len() < 3 || members.iter().any(|&v| adj(v).len() != 2) {
        return false;
    }
    let mut seen = HashSet::from([members[0]]);
    let mut stack = vec![members[0]];
    while let Some(v) = stack.pop() {
        for u in adj(v) {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == members.len()
}
