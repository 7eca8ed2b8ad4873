//! Canonical labelling of vertex-coloured, edge-weighted directed graphs.
//!
//! Individualization-refinement: the initial colouring is refined to an
//! equitable ordered partition, then non-singleton cells are individualized
//! one vertex at a time. Every leaf gives a node order; the canonical form is
//! the lexicographically smallest serialization over the leaves. Leaves with
//! identical serializations expose automorphisms, which prune siblings lying
//! in the same orbit of the pointwise stabilizer of the current path.

use std::fmt;

use serde::{Serialize, Serializer};

/// Input graph: `colors[v]` and a dense `n x n` weight matrix (`0` = no edge).
pub(crate) struct ColoredGraph {
    pub colors: Vec<u64>,
    pub adj: Vec<i128>,
}

impl ColoredGraph {
    fn n(&self) -> usize {
        self.colors.len()
    }
}

pub(crate) struct Labeling {
    pub key: CanonicalKey,
    /// `order[p]` is the vertex placed at canonical position `p`.
    pub order: Vec<usize>,
    /// Automorphisms found during the search; they generate the full group.
    pub generators: Vec<Vec<usize>>,
}

/// Canonical serialization of a (possibly group-aware) quiver.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn encode(n: usize, serial: &[i128]) -> Self {
        let mut out = Vec::with_capacity(serial.len() + 2);
        push_varint(&mut out, n as u128);
        for &v in serial {
            // zigzag
            let z = ((v << 1) ^ (v >> 127)) as u128;
            push_varint(&mut out, z);
        }
        CanonicalKey(out)
    }
}

fn push_varint(out: &mut Vec<u8>, mut v: u128) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

pub(crate) fn canonical_labeling(g: &ColoredGraph) -> Labeling {
    let n = g.n();
    if n == 0 {
        return Labeling { key: CanonicalKey::encode(0, &[]), order: vec![], generators: vec![] };
    }
    let mut by_color: Vec<(u64, usize)> = g.colors.iter().copied().zip(0..n).collect();
    by_color.sort_unstable();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (i, &(c, v)) in by_color.iter().enumerate() {
        if i > 0 && by_color[i - 1].0 == c {
            cells.last_mut().unwrap().push(v);
        } else {
            cells.push(vec![v]);
        }
    }
    let mut search = Search { g, n, first: None, best: None, generators: Vec::new() };
    search.descend(cells, &mut Vec::new());
    let (order, serial) = search.best.expect("search visits at least one leaf");
    Labeling { key: CanonicalKey::encode(n, &serial), order, generators: search.generators }
}

type Leaf = (Vec<usize>, Vec<i128>);

struct Search<'a> {
    g: &'a ColoredGraph,
    n: usize,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<Vec<usize>>, path: &mut Vec<usize>) {
        let cells = refine(self.g, cells);
        if cells.len() == self.n {
            self.leaf(cells.iter().map(|c| c[0]).collect());
            return;
        }
        let target = (0..cells.len())
            .filter(|&i| cells[i].len() > 1)
            .min_by_key(|&i| (cells[i].len(), i))
            .unwrap();
        let mut candidates = cells[target].clone();
        candidates.sort_unstable();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !tried.is_empty() && self.same_orbit_as_tried(v, &tried, path) {
                continue;
            }
            tried.push(v);
            let mut child = cells.clone();
            let rest: Vec<usize> = cells[target].iter().copied().filter(|&u| u != v).collect();
            child[target] = vec![v];
            child.insert(target + 1, rest);
            path.push(v);
            self.descend(child, path);
            path.pop();
        }
    }

    fn same_orbit_as_tried(&self, v: usize, tried: &[usize], path: &[usize]) -> bool {
        let mut uf: Vec<usize> = (0..self.n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        for gen in &self.generators {
            if path.iter().any(|&p| gen[p] != p) {
                continue;
            }
            for x in 0..self.n {
                let (a, b) = (find(&mut uf, x), find(&mut uf, gen[x]));
                if a != b {
                    uf[a] = b;
                }
            }
        }
        let rv = find(&mut uf, v);
        tried.iter().any(|&u| find(&mut uf, u) == rv)
    }

    fn serialize(&self, order: &[usize]) -> Vec<i128> {
        let n = self.n;
        let mut s = Vec::with_capacity(n + n * n);
        s.extend(order.iter().map(|&v| self.g.colors[v] as i128));
        for &a in order {
            for &b in order {
                s.push(self.g.adj[a * n + b]);
            }
        }
        s
    }

    fn record(&mut self, from: &[usize], to: &[usize]) {
        let mut gamma = vec![0; self.n];
        for (p, &v) in from.iter().enumerate() {
            gamma[v] = to[p];
        }
        if gamma.iter().enumerate().any(|(i, &x)| i != x) && !self.generators.contains(&gamma) {
            self.generators.push(gamma);
        }
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let serial = self.serialize(&order);
        let Some(first) = &self.first else {
            self.first = Some((order.clone(), serial.clone()));
            self.best = Some((order, serial));
            return;
        };
        if first.1 == serial {
            let from = first.0.clone();
            self.record(&from, &order);
        }
        let best = self.best.as_ref().unwrap();
        if best.1 == serial {
            let from = best.0.clone();
            self.record(&from, &order);
        } else if serial < best.1 {
            self.best = Some((order, serial));
        }
    }
}

fn refine(g: &ColoredGraph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut cell_of = vec![0u32; n];
    loop {
        for (ci, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = ci as u32;
            }
        }
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(u32, i128, i128)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut sig: Vec<(u32, i128, i128)> = (0..n)
                        .filter(|&u| u != v)
                        .filter_map(|u| {
                            let (out, inc) = (g.adj[v * n + u], g.adj[u * n + v]);
                            (out != 0 || inc != 0).then_some((cell_of[u], out, inc))
                        })
                        .collect();
                    sig.sort_unstable();
                    (sig, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}
