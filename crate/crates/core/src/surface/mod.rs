//! The once-punctured disk with `n` marked points and a special puncture.
//!
//! Boundary points are numbered `0..n` counter-clockwise. `Chord(i, j)` is the
//! arc from `i` to `j` whose puncture-free side contains the boundary points
//! `i, i+1, ..., j`; `Radius(m, tag)` joins `m` to the puncture and `Loop(m)`
//! is the loop at `m` cutting out a self-folded triangle around the puncture.
//! Every triangulation has `n` arcs. A flip replaces one arc by the unique
//! other arc compatible with the rest.

mod lift;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clusters::{ClusterError, FoldedSeed, Seed, SeedMode};
use crate::catalog::Catalog;
use crate::folding::IsoConvention;
use crate::qcore::{canonical_labeling, ColoredGraph};
use crate::search::{explore, Limits, Space};
use crate::symalg::RationalFunction;

pub use lift::triangulation_quiver;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("a disk needs at least {min} marked points, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("arcs do not form a triangulation")]
    NotATriangulation,
    #[error("arc {0} is not in the triangulation")]
    ArcNotPresent(DiskArc),
    #[error("arc {arc} has {count} possible flips")]
    BadFlip { arc: DiskArc, count: usize },
    #[error("flip graph exceeded the cap of {0} triangulations")]
    CapExceeded(usize),
    #[error("identity fails at {arc}: {detail}")]
    IdentityViolation { arc: DiskArc, detail: String },
    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Plain,
    Tagged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiskArc {
    Chord(usize, usize),
    Radius(usize, Tag),
    Loop(usize),
}

impl std::fmt::Display for DiskArc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiskArc::Chord(i, j) => write!(f, "chord({}, {})", i + 1, j + 1),
            DiskArc::Radius(m, Tag::Plain) => write!(f, "radius({})", m + 1),
            DiskArc::Radius(m, Tag::Tagged) => write!(f, "radius({})*", m + 1),
            DiskArc::Loop(m) => write!(f, "loop({})", m + 1),
        }
    }
}

/// Which compatibility rules apply at the puncture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rules {
    /// Loops allowed; radii must share their tag.
    Special,
    /// Ordinary tagged arcs: no loops; radii at the same point may differ in tag.
    Ordinary,
}

/// Boundary edges `i, ..., j-1` on the puncture-free side of a chord.
fn edges(n: usize, i: usize, j: usize) -> u128 {
    let len = (j + n - i) % n;
    (0..len).fold(0u128, |m, s| m | 1 << ((i + s) % n))
}

/// Boundary points strictly inside the puncture-free side of a chord.
fn interior_contains(n: usize, i: usize, j: usize, m: usize) -> bool {
    let len = (j + n - i) % n;
    let off = (m + n - i) % n;
    off > 0 && off < len
}

fn compatible(n: usize, a: DiskArc, b: DiskArc, rules: Rules) -> bool {
    use DiskArc::*;
    if a == b {
        return true;
    }
    match (a, b) {
        (Chord(i, j), Chord(k, l)) => {
            let (e, f) = (edges(n, i, j), edges(n, k, l));
            e & f == 0 || e & f == e || e & f == f
        }
        (Chord(i, j), Radius(m, _) | Loop(m)) | (Radius(m, _) | Loop(m), Chord(i, j)) => {
            !interior_contains(n, i, j, m)
        }
        (Radius(m, s), Radius(p, t)) => match rules {
            Rules::Special => s == t,
            Rules::Ordinary => s == t || m == p,
        },
        (Loop(m), Radius(p, _)) | (Radius(p, _), Loop(m)) => rules == Rules::Special && m == p,
        (Loop(_), Loop(_)) => false,
    }
}

fn census(n: usize, rules: Rules) -> Vec<DiskArc> {
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if j != i && j != (i + 1) % n {
                arcs.push(DiskArc::Chord(i, j));
            }
        }
    }
    for m in 0..n {
        arcs.push(DiskArc::Radius(m, Tag::Plain));
        arcs.push(DiskArc::Radius(m, Tag::Tagged));
    }
    if rules == Rules::Special {
        arcs.extend((0..n).map(DiskArc::Loop));
    }
    arcs
}

/// A triangulation; `arcs[p]` is the arc in position `p`. Flips keep positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskTriangulation {
    n: usize,
    arcs: Vec<DiskArc>,
}

impl DiskTriangulation {
    /// Checks pairwise compatibility under the special rules and the arc count.
    pub fn new(n: usize, arcs: Vec<DiskArc>) -> Result<Self, SurfaceError> {
        let t = DiskTriangulation { n, arcs };
        let ok = t.arcs.len() == n
            && t.arcs.iter().all(|&a| census(n, Rules::Special).contains(&a))
            && t.arcs.iter().enumerate().all(|(p, &a)| {
                t.arcs[p + 1..].iter().all(|&b| a != b && compatible(n, a, b, Rules::Special))
            });
        if !ok {
            return Err(SurfaceError::NotATriangulation);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[DiskArc] {
        &self.arcs
    }

    pub fn loop_point(&self) -> Option<usize> {
        self.arcs.iter().find_map(|a| match a {
            DiskArc::Loop(m) => Some(*m),
            _ => None,
        })
    }

    /// Sorted arc list; equal for equal triangulations.
    pub fn key(&self) -> Vec<DiskArc> {
        let mut k = self.arcs.clone();
        k.sort_unstable();
        k
    }

    fn flip_at(&self, p: usize, rules: Rules) -> Result<DiskTriangulation, SurfaceError> {
        let old = self.arcs[p];
        let others: Vec<DiskArc> = self.arcs.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &a)| a).collect();
        let options: Vec<DiskArc> = census(self.n, rules)
            .into_iter()
            .filter(|&b| b != old && !others.contains(&b))
            .filter(|&b| others.iter().all(|&a| compatible(self.n, a, b, rules)))
            .collect();
        if options.len() != 1 {
            return Err(SurfaceError::BadFlip { arc: old, count: options.len() });
        }
        let mut arcs = self.arcs.clone();
        arcs[p] = options[0];
        Ok(DiskTriangulation { n: self.n, arcs })
    }
}

/// Fan of plain radii, arc `m` in position `m`, together with the arc census.
#[derive(Clone, Debug)]
pub struct Disk {
    pub n: usize,
    pub arcs: Vec<DiskArc>,
    pub initial: DiskTriangulation,
}

impl Disk {
    pub fn chords(&self) -> usize {
        self.arcs.iter().filter(|a| matches!(a, DiskArc::Chord(..))).count()
    }

    pub fn radii(&self) -> usize {
        self.arcs.iter().filter(|a| matches!(a, DiskArc::Radius(..))).count()
    }

    pub fn loops(&self) -> usize {
        self.arcs.iter().filter(|a| matches!(a, DiskArc::Loop(..))).count()
    }
}

/// `n >= 2`; the digon only serves to replay the flip rules.
pub fn build_disk(n: usize) -> Result<Disk, SurfaceError> {
    if n < 2 {
        return Err(SurfaceError::TooSmall { n, min: 2 });
    }
    Ok(Disk { n, arcs: census(n, Rules::Special), initial: fan(n) })
}

fn fan(n: usize) -> DiskTriangulation {
    DiskTriangulation { n, arcs: (0..n).map(|m| DiskArc::Radius(m, Tag::Plain)).collect() }
}

pub fn special_flip(t: &DiskTriangulation, a: DiskArc) -> Result<DiskTriangulation, SurfaceError> {
    let p = t.arcs.iter().position(|&b| b == a).ok_or(SurfaceError::ArcNotPresent(a))?;
    t.flip_at(p, Rules::Special)
}

struct FlipSpace {
    n: usize,
    rules: Rules,
}

impl Space for FlipSpace {
    type State = DiskTriangulation;
    type Key = Vec<DiskArc>;
    type Error = SurfaceError;

    fn moves(&self) -> usize {
        self.n
    }

    fn step(&self, t: &DiskTriangulation, p: usize) -> Result<Option<DiskTriangulation>, SurfaceError> {
        t.flip_at(p, self.rules).map(Some)
    }

    fn key(&self, t: &DiskTriangulation) -> Vec<DiskArc> {
        t.key()
    }
}

/// Triangulations split by the self-folded triangle they contain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub no_loop: usize,
    pub loop_plain: usize,
    pub loop_tagged: usize,
}

#[derive(Clone, Debug)]
pub struct FlipGraph {
    pub triangulations: Vec<DiskTriangulation>,
    /// `neighbors[v][p]` is the triangulation obtained by flipping position `p`.
    pub neighbors: Vec<Vec<usize>>,
    pub partition: Partition,
}

impl FlipGraph {
    pub fn len(&self) -> usize {
        self.triangulations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangulations.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Canonical form of the underlying undirected graph.
    pub fn shape_key(&self) -> crate::qcore::CanonicalKey {
        shape_key(&self.neighbors)
    }
}

pub(crate) fn shape_key(neighbors: &[Vec<usize>]) -> crate::qcore::CanonicalKey {
    let n = neighbors.len();
    let mut adj = vec![0i128; n * n];
    for (u, row) in neighbors.iter().enumerate() {
        for &v in row {
            adj[u * n + v] = 1;
            adj[v * n + u] = 1;
        }
    }
    canonical_labeling(&ColoredGraph { colors: vec![0; n], adj }).key
}

const FLIP_CAP: usize = 1_000_000;

fn flip_closure(n: usize, rules: Rules) -> Result<crate::search::Explored<DiskTriangulation>, SurfaceError> {
    let (ex, failure) = explore(&FlipSpace { n, rules }, fan(n), Limits::states(FLIP_CAP));
    if let Some(f) = failure {
        return Err(f.error);
    }
    if ex.cap_hit {
        return Err(SurfaceError::CapExceeded(FLIP_CAP));
    }
    Ok(ex)
}

pub fn enumerate_triangulations(n: usize) -> Result<FlipGraph, SurfaceError> {
    if n < 3 {
        return Err(SurfaceError::TooSmall { n, min: 3 });
    }
    let ex = flip_closure(n, Rules::Special)?;
    let mut partition = Partition::default();
    for t in &ex.states {
        match t.loop_point() {
            None => partition.no_loop += 1,
            Some(m) => {
                if t.arcs.contains(&DiskArc::Radius(m, Tag::Plain)) {
                    partition.loop_plain += 1;
                } else {
                    partition.loop_tagged += 1;
                }
            }
        }
    }
    let neighbors = ex.neighbors.iter().map(|row| row.iter().map(|v| v.expect("every flip exists")).collect()).collect();
    Ok(FlipGraph { triangulations: ex.states, neighbors, partition })
}

/// Outcome of walking the flip graph alongside the folded exchange graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipExchangeMatch {
    pub triangulations: usize,
    pub seeds: usize,
    /// Triangulation to seed is injective along the paired walk.
    pub bijective: bool,
    /// The lifted quiver of every triangulation equals the seed's folded quiver,
    /// groups matched position by position.
    pub quivers_agree: bool,
    /// The two unlabelled graphs have the same canonical form.
    pub same_shape: bool,
}

impl FlipExchangeMatch {
    pub fn isomorphic(&self) -> bool {
        self.triangulations == self.seeds && self.bijective && self.quivers_agree && self.same_shape
    }
}

struct PairSpace {
    n: usize,
}

impl Space for PairSpace {
    type State = (DiskTriangulation, FoldedSeed);
    type Key = Vec<DiskArc>;
    type Error = SurfaceError;

    fn moves(&self) -> usize {
        self.n
    }

    fn step(&self, s: &Self::State, p: usize) -> Result<Option<Self::State>, SurfaceError> {
        Ok(Some((s.0.flip_at(p, Rules::Special)?, s.1.group_mutate(p)?)))
    }

    fn key(&self, s: &Self::State) -> Vec<DiskArc> {
        s.0.key()
    }
}

fn paired_walk(n: usize) -> Result<crate::search::Explored<(DiskTriangulation, FoldedSeed)>, SurfaceError> {
    let base = Catalog::family("Dhat", n).map_err(|_| SurfaceError::TooSmall { n, min: 3 })?.folded;
    let start = (fan(n), FoldedSeed::initial(base, SeedMode::ClusterFolded));
    let (ex, failure) = explore(&PairSpace { n }, start, Limits::states(FLIP_CAP));
    if let Some(f) = failure {
        return Err(f.error);
    }
    Ok(ex)
}

/// Compares the flip graph with the exchange graph of the `Dhat` folding.
pub fn compare_with_exchange_graph(n: usize) -> Result<FlipExchangeMatch, SurfaceError> {
    if n < 3 {
        return Err(SurfaceError::TooSmall { n, min: 3 });
    }
    let ex = paired_walk(n)?;
    let mut seen = HashMap::new();
    let mut bijective = true;
    let mut quivers_agree = true;
    for (t, s) in &ex.states {
        bijective &= seen.insert(s.key(IsoConvention::GroupPermuting), ()).is_none();
        let (fq, _) = triangulation_quiver(t);
        quivers_agree &= fq.canonical_key_with(IsoConvention::GroupFixing)
            == s.folded().canonical_key_with(IsoConvention::GroupFixing);
    }
    let graph = crate::clusters::enumerate_exchange_graph(&ex.states[0].1, FLIP_CAP)?;
    let exchange_neighbors: Vec<Vec<usize>> =
        (0..graph.len()).map(|v| graph.neighbors(v).iter().flatten().copied().collect()).collect();
    let flip_neighbors: Vec<Vec<usize>> =
        ex.neighbors.iter().map(|row| row.iter().map(|v| v.expect("every flip exists")).collect()).collect();
    Ok(FlipExchangeMatch {
        triangulations: ex.states.len(),
        seeds: graph.len(),
        bijective,
        quivers_agree,
        same_shape: shape_key(&flip_neighbors) == shape_key(&exchange_neighbors),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    /// Arcs checked, by kind.
    pub shared: usize,
    pub tagged_radii: usize,
    pub loops: usize,
}

/// Variable of every arc reached by a walk, checking that it never depends on the path.
fn arc_variables<'a, I>(pairs: I) -> Result<HashMap<DiskArc, RationalFunction>, SurfaceError>
where
    I: Iterator<Item = (&'a DiskTriangulation, &'a [RationalFunction])>,
{
    let mut out: HashMap<DiskArc, RationalFunction> = HashMap::new();
    for (t, vars) in pairs {
        for (a, v) in t.arcs.iter().zip(vars) {
            match out.get(a) {
                Some(w) if w != v => {
                    return Err(SurfaceError::IdentityViolation {
                        arc: *a,
                        detail: format!("variable depends on the triangulation: {w} versus {v}"),
                    })
                }
                Some(_) => {}
                None => {
                    out.insert(*a, v.clone());
                }
            }
        }
    }
    Ok(out)
}

struct OrdinarySpace {
    n: usize,
}

impl Space for OrdinarySpace {
    type State = (DiskTriangulation, Seed);
    type Key = Vec<DiskArc>;
    type Error = SurfaceError;

    fn moves(&self) -> usize {
        self.n
    }

    fn step(&self, s: &Self::State, p: usize) -> Result<Option<Self::State>, SurfaceError> {
        Ok(Some((s.0.flip_at(p, Rules::Ordinary)?, s.1.mutate(p)?)))
    }

    fn key(&self, s: &Self::State) -> Vec<DiskArc> {
        s.0.key()
    }
}

/// Compares the folded algebra of `Dhat n` with the ordinary algebra of the
/// punctured `n`-gon, both started from the fan of plain radii: shared arcs
/// carry equal variables, a tagged radius carries twice the ordinary variable
/// and a loop at `m` carries the product of the two radii at `m`.
pub fn verify_variable_identities(n: usize) -> Result<IdentityReport, SurfaceError> {
    if n < 3 {
        return Err(SurfaceError::TooSmall { n, min: 3 });
    }
    let folded = paired_walk(n)?;
    let vars: Vec<Vec<RationalFunction>> =
        folded.states.iter().map(|(_, s)| (0..n).map(|g| s.group_var(g).clone()).collect()).collect();
    let special = arc_variables(folded.states.iter().zip(&vars).map(|((t, _), v)| (t, v.as_slice())))?;

    let cycle = Catalog::family("Dcirc", n).map_err(|_| SurfaceError::TooSmall { n, min: 3 })?.folded;
    let start = (fan(n), Seed::initial(cycle.quiver().clone()));
    let (ex, failure) = explore(&OrdinarySpace { n }, start, Limits::states(FLIP_CAP));
    if let Some(f) = failure {
        return Err(f.error);
    }
    let ordinary = arc_variables(ex.states.iter().map(|(t, s)| (t, s.vars())))?;

    let two = RationalFunction::constant(n, 2);
    let mut report = IdentityReport { n, shared: 0, tagged_radii: 0, loops: 0 };
    let mut arcs: Vec<&DiskArc> = special.keys().collect();
    arcs.sort();
    for &arc in arcs {
        let z_tilde = &special[&arc];
        let (expected, slot) = match arc {
            DiskArc::Loop(m) => {
                let p = lookup(&ordinary, DiskArc::Radius(m, Tag::Plain))?;
                let t = lookup(&ordinary, DiskArc::Radius(m, Tag::Tagged))?;
                (p.mul(t), &mut report.loops)
            }
            DiskArc::Radius(_, Tag::Tagged) => (two.mul(lookup(&ordinary, arc)?), &mut report.tagged_radii),
            _ => (lookup(&ordinary, arc)?.clone(), &mut report.shared),
        };
        if *z_tilde != expected {
            return Err(SurfaceError::IdentityViolation {
                arc,
                detail: format!("folded variable {z_tilde}, expected {expected}"),
            });
        }
        *slot += 1;
    }
    Ok(report)
}

fn lookup(map: &HashMap<DiskArc, RationalFunction>, a: DiskArc) -> Result<&RationalFunction, SurfaceError> {
    map.get(&a).ok_or_else(|| SurfaceError::IdentityViolation { arc: a, detail: "arc never reached".into() })
}

/// Number of ordinary tagged triangulations of the punctured `n`-gon.
pub fn ordinary_count(n: usize) -> Result<usize, SurfaceError> {
    Ok(flip_closure(n, Rules::Ordinary)?.states.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_census_splits() {
        let d = build_disk(3).unwrap();
        assert_eq!((d.chords(), d.radii(), d.loops()), (3, 6, 3));
        assert_eq!(build_disk(4).unwrap().arcs.len(), 20);
        assert!(matches!(build_disk(1), Err(SurfaceError::TooSmall { .. })));
    }

    #[test]
    fn flips_are_involutions() {
        let g = enumerate_triangulations(4).unwrap();
        for (v, t) in g.triangulations.iter().enumerate() {
            for p in 0..4 {
                let s = t.flip_at(p, Rules::Special).unwrap();
                assert_eq!(s.flip_at(p, Rules::Special).unwrap(), *t);
                assert!(g.neighbors[g.neighbors[v][p]].contains(&v));
            }
        }
    }

    #[test]
    fn digon_flip_gives_self_folded_triangle() {
        let t = fan(2);
        let s = special_flip(&t, DiskArc::Radius(0, Tag::Plain)).unwrap();
        assert_eq!(s.arcs(), &[DiskArc::Loop(1), DiskArc::Radius(1, Tag::Plain)]);
        let u = special_flip(&s, DiskArc::Radius(1, Tag::Plain)).unwrap();
        assert_eq!(u.arcs(), &[DiskArc::Loop(1), DiskArc::Radius(1, Tag::Tagged)]);
        assert_eq!(special_flip(&u, DiskArc::Radius(1, Tag::Tagged)).unwrap(), s);
        assert!(matches!(special_flip(&u, DiskArc::Loop(0)), Err(SurfaceError::ArcNotPresent(_))));
    }

    #[test]
    fn triangle_counts() {
        let g = enumerate_triangulations(3).unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g.partition.no_loop + g.partition.loop_plain, 14);
        assert_eq!(g.partition.loop_tagged, 6);
        assert_eq!(ordinary_count(3).unwrap(), 14);
    }

    #[test]
    fn validated_constructor() {
        assert!(DiskTriangulation::new(3, fan(3).arcs).is_ok());
        let bad = vec![DiskArc::Radius(0, Tag::Plain), DiskArc::Radius(1, Tag::Tagged), DiskArc::Radius(2, Tag::Plain)];
        assert!(DiskTriangulation::new(3, bad).is_err());
    }
}
