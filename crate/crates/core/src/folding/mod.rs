//! Foldings: a partition of the nodes of a quiver into groups that are always
//! mutated together.
//!
//! A group mutation mutates every node of the group in turn. When the group
//! has no internal arrows the individual mutations commute, so the result is
//! independent of the order. A folding is valid when no group ever acquires
//! an internal arrow along any sequence of group mutations.

mod classify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{canonical_labeling, CanonicalKey, ColoredGraph, Quiver, QuiverError, QuiverJson};
use crate::search::{explore, Limits, Space};

pub use classify::{classify_folding, folded_matrix, mutate_matrix, symmetrizer, Classification, SpecialReason};

#[derive(Debug, Error)]
pub enum FoldingError {
    #[error("groups do not partition the nodes: {0}")]
    NotAPartition(String),
    #[error("group {group} contains the arrow between nodes {i} and {j}")]
    IntraGroupArrow { group: usize, i: usize, j: usize },
    #[error("group {0} mixes frozen and unfrozen nodes")]
    MixedFrozenGroup(usize),
    #[error("permutation is not an automorphism of the quiver")]
    NotAnAutomorphism,
    #[error("group {0} is frozen")]
    FrozenGroup(usize),
    #[error("group index {0} out of range")]
    GroupOutOfRange(usize),
    #[error("folded class exceeded the cap of {} quivers", .0.keys.len())]
    CapExceeded(Box<FoldedClass>),
    #[error("folding broken by group mutation word {word:?}: group {group} gained an arrow between {i} and {j}")]
    FoldingBroken { word: Vec<usize>, group: usize, i: usize, j: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("invalid folding json: {0}")]
    Json(String),
}

/// How relabellings may act on groups when comparing folded quivers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoConvention {
    /// Node bijections that carry groups onto groups, possibly permuting them.
    #[default]
    GroupPermuting,
    /// Node bijections that fix every group setwise.
    GroupFixing,
    /// Isomorphism of the underlying quiver alone; the grouping is ignored.
    UnderlyingQuiver,
}

const MEMBER: i128 = 1 << 100;
const NODE_COLOR: u64 = 0;
const GROUP_COLOR: u64 = 1 << 62;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FoldedQuiver {
    quiver: Quiver,
    groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
}

impl FoldedQuiver {
    /// Checks that `groups` partition the nodes, that frozen status is uniform
    /// per group and that no group contains an arrow of the base quiver.
    pub fn new(quiver: Quiver, groups: Vec<Vec<usize>>) -> Result<Self, FoldingError> {
        let n = quiver.n();
        let mut group_of = vec![usize::MAX; n];
        let mut groups = groups;
        for (g, group) in groups.iter_mut().enumerate() {
            if group.is_empty() {
                return Err(FoldingError::NotAPartition(format!("group {g} is empty")));
            }
            group.sort_unstable();
            for &v in group.iter() {
                if v >= n {
                    return Err(FoldingError::NotAPartition(format!("node {v} out of range")));
                }
                if group_of[v] != usize::MAX {
                    return Err(FoldingError::NotAPartition(format!("node {v} appears twice")));
                }
                group_of[v] = g;
            }
        }
        if let Some(v) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(FoldingError::NotAPartition(format!("node {v} is in no group")));
        }
        for (g, group) in groups.iter().enumerate() {
            let f = quiver.is_frozen(group[0]);
            if group.iter().any(|&v| quiver.is_frozen(v) != f) {
                return Err(FoldingError::MixedFrozenGroup(g));
            }
        }
        let fq = FoldedQuiver { quiver, groups, group_of };
        if let Some((group, i, j)) = fq.intra_group_arrow() {
            return Err(FoldingError::IntraGroupArrow { group, i, j });
        }
        Ok(fq)
    }

    /// Like [`FoldedQuiver::new`], freezing every node of the listed groups first.
    pub fn with_frozen_groups(
        quiver: Quiver,
        groups: Vec<Vec<usize>>,
        frozen_groups: &[usize],
    ) -> Result<Self, FoldingError> {
        let mut frozen = Vec::new();
        for &g in frozen_groups {
            let group = groups.get(g).ok_or(FoldingError::GroupOutOfRange(g))?;
            frozen.extend_from_slice(group);
        }
        FoldedQuiver::new(quiver.with_frozen(&frozen)?, groups)
    }

    /// Every node in its own group.
    pub fn unfolded(quiver: Quiver) -> Self {
        let groups = (0..quiver.n()).map(|i| vec![i]).collect();
        FoldedQuiver::new(quiver, groups).expect("singleton groups always form a folding")
    }

    /// Groups are the orbits of the cyclic group generated by `sigma`.
    pub fn by_automorphism(quiver: Quiver, sigma: &[usize]) -> Result<Self, FoldingError> {
        if !quiver.is_automorphism(sigma) {
            return Err(FoldingError::NotAnAutomorphism);
        }
        let n = quiver.n();
        let mut seen = vec![false; n];
        let mut groups = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                orbit.push(v);
                v = sigma[v];
            }
            groups.push(orbit);
        }
        FoldedQuiver::new(quiver, groups)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn group_of(&self, node: usize) -> usize {
        self.group_of[node]
    }

    pub fn is_group_frozen(&self, g: usize) -> bool {
        self.quiver.is_frozen(self.groups[g][0])
    }

    pub fn frozen_groups(&self) -> Vec<usize> {
        (0..self.groups.len()).filter(|&g| self.is_group_frozen(g)).collect()
    }

    pub fn unfrozen_groups(&self) -> Vec<usize> {
        (0..self.groups.len()).filter(|&g| !self.is_group_frozen(g)).collect()
    }

    /// First arrow found inside a group, as `(group, i, j)`.
    pub fn intra_group_arrow(&self) -> Option<(usize, usize, usize)> {
        (0..self.groups.len()).find_map(|g| self.arrow_inside(g).map(|(i, j)| (g, i, j)))
    }

    fn arrow_inside(&self, g: usize) -> Option<(usize, usize)> {
        let group = &self.groups[g];
        for (a, &i) in group.iter().enumerate() {
            for &j in &group[a + 1..] {
                if self.quiver.b(i, j) != 0 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Mutates every node of group `g` in turn.
    pub fn group_mutate(&self, g: usize) -> Result<FoldedQuiver, FoldingError> {
        if g >= self.groups.len() {
            return Err(FoldingError::GroupOutOfRange(g));
        }
        if self.is_group_frozen(g) {
            return Err(FoldingError::FrozenGroup(g));
        }
        if let Some((i, j)) = self.arrow_inside(g) {
            return Err(FoldingError::IntraGroupArrow { group: g, i, j });
        }
        let mut q = self.quiver.clone();
        for &v in &self.groups[g] {
            q = q.mutate_unchecked_frozen(v)?;
        }
        Ok(FoldedQuiver { quiver: q, groups: self.groups.clone(), group_of: self.group_of.clone() })
    }

    /// Applies a word of group indices from left to right.
    pub fn group_mutate_word(&self, word: &[usize]) -> Result<FoldedQuiver, FoldingError> {
        let mut fq = self.clone();
        for &g in word {
            fq = fq.group_mutate(g)?;
        }
        Ok(fq)
    }

    /// Relabels nodes (`old i -> perm[i]`) keeping group indices.
    pub fn relabeled(&self, perm: &[usize]) -> Result<FoldedQuiver, FoldingError> {
        let quiver = self.quiver.permuted(perm)?;
        let groups = self.groups.iter().map(|g| g.iter().map(|&v| perm[v]).collect()).collect();
        FoldedQuiver::new(quiver, groups)
    }

    /// Same quiver with groups listed in a different order (`new[k] = old[order[k]]`).
    pub fn with_group_order(&self, order: &[usize]) -> Result<FoldedQuiver, FoldingError> {
        let groups = order.iter().map(|&g| self.groups[g].clone()).collect();
        FoldedQuiver::new(self.quiver.clone(), groups)
    }

    /// Group-aware canonical key under the default (group-permuting) convention.
    pub fn canonical_key(&self) -> CanonicalKey {
        self.canonical_key_with(IsoConvention::GroupPermuting)
    }

    pub fn canonical_key_with(&self, convention: IsoConvention) -> CanonicalKey {
        if convention == IsoConvention::UnderlyingQuiver {
            return self.quiver.canonical();
        }
        let colors: Vec<u64> = (0..self.quiver.n()).map(|v| self.quiver.is_frozen(v) as u64).collect();
        canonical_labeling(&self.colored_graph(&colors, convention)).key
    }

    /// Auxiliary graph: one vertex per node followed by one vertex per group,
    /// with membership edges. Node colours are supplied by the caller.
    pub(crate) fn colored_graph(&self, node_colors: &[u64], convention: IsoConvention) -> ColoredGraph {
        let n = self.quiver.n();
        let k = self.groups.len();
        let total = n + k;
        let mut adj = vec![0i128; total * total];
        for i in 0..n {
            for j in 0..n {
                adj[i * total + j] = self.quiver.b(i, j) as i128;
            }
            let g = n + self.group_of[i];
            adj[i * total + g] = MEMBER;
            adj[g * total + i] = -MEMBER;
        }
        let mut colors: Vec<u64> = node_colors.iter().map(|&c| NODE_COLOR | c).collect();
        for g in 0..k {
            let fixed = match convention {
                IsoConvention::GroupFixing => (g as u64 + 1) << 1,
                _ => 0,
            };
            colors.push(GROUP_COLOR | fixed | self.is_group_frozen(g) as u64);
        }
        ColoredGraph { colors, adj }
    }

    pub fn to_json(&self) -> FoldingJson {
        FoldingJson { quiver: self.quiver.to_json(), groups: self.groups.clone(), frozen_groups: self.frozen_groups() }
    }

    pub fn from_json(j: &FoldingJson) -> Result<Self, FoldingError> {
        let q = Quiver::from_json(&j.quiver)?;
        FoldedQuiver::with_frozen_groups(q, j.groups.clone(), &j.frozen_groups)
    }

    pub fn parse_json(text: &str) -> Result<Self, FoldingError> {
        let j: FoldingJson = serde_json::from_str(text).map_err(|e| FoldingError::Json(e.to_string()))?;
        FoldedQuiver::from_json(&j)
    }
}

/// Quiver JSON extended with `"groups"` and `"frozen_groups"` (0-based).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldingJson {
    #[serde(flatten)]
    pub quiver: QuiverJson,
    pub groups: Vec<Vec<usize>>,
    #[serde(default)]
    pub frozen_groups: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FoldingStatus {
    /// The whole folded class was explored.
    Valid { class_size: usize },
    /// Every folded quiver within `depth` group mutations is fine; caps stopped the search.
    ValidUpTo { depth: usize },
    /// Applying `word` creates an arrow inside `group`.
    Invalid { word: Vec<usize>, group: usize, i: usize, j: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldingVerdict {
    pub status: FoldingStatus,
    pub class_size: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoldedClass {
    pub keys: Vec<CanonicalKey>,
    pub exhausted: bool,
    pub convention: IsoConvention,
}

impl FoldedClass {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, fq: &FoldedQuiver) -> bool {
        self.keys.binary_search(&fq.canonical_key_with(self.convention)).is_ok()
    }
}

pub(crate) struct GroupMutationSpace {
    pub groups: usize,
    pub convention: IsoConvention,
}

impl Space for GroupMutationSpace {
    type State = FoldedQuiver;
    type Key = CanonicalKey;
    type Error = FoldingError;

    fn moves(&self) -> usize {
        self.groups
    }

    fn step(&self, fq: &FoldedQuiver, g: usize) -> Result<Option<FoldedQuiver>, FoldingError> {
        if fq.is_group_frozen(g) {
            return Ok(None);
        }
        let next = fq.group_mutate(g)?;
        if let Some((group, i, j)) = next.intra_group_arrow() {
            return Err(FoldingError::IntraGroupArrow { group, i, j });
        }
        Ok(Some(next))
    }

    fn key(&self, fq: &FoldedQuiver) -> CanonicalKey {
        fq.canonical_key_with(self.convention)
    }
}

/// Searches the folded class for a group mutation word that creates an
/// intra-group arrow. The witness is a shortest word, ties broken
/// lexicographically by group index.
pub fn validate_folding(fq: &FoldedQuiver, depth_cap: usize, size_cap: usize) -> FoldingVerdict {
    let space = GroupMutationSpace { groups: fq.num_groups(), convention: IsoConvention::GroupPermuting };
    let limits = Limits { max_states: size_cap.max(1), max_depth: Some(depth_cap) };
    let (ex, failure) = explore(&space, fq.clone(), limits);
    if let Some(f) = failure {
        let word = f.word(&ex);
        return match f.error {
            FoldingError::IntraGroupArrow { group, i, j } => {
                FoldingVerdict { status: FoldingStatus::Invalid { word, group, i, j }, class_size: None }
            }
            other => panic!("unexpected failure during validation: {other}"),
        };
    }
    if ex.exhausted {
        let n = ex.states.len();
        FoldingVerdict { status: FoldingStatus::Valid { class_size: n }, class_size: Some(n) }
    } else {
        // deepest level whose every state was expanded
        let depth = (0..ex.states.len())
            .filter(|&v| !ex.expanded[v])
            .map(|v| ex.depth[v])
            .min()
            .unwrap_or(0);
        FoldingVerdict { status: FoldingStatus::ValidUpTo { depth }, class_size: None }
    }
}

/// Folded mutation class under the default convention.
pub fn enumerate_folded_class(fq: &FoldedQuiver, cap: usize) -> Result<FoldedClass, FoldingError> {
    enumerate_folded_class_with(fq, cap, IsoConvention::GroupPermuting)
}

pub fn enumerate_folded_class_with(
    fq: &FoldedQuiver,
    cap: usize,
    convention: IsoConvention,
) -> Result<FoldedClass, FoldingError> {
    if let Some((group, i, j)) = fq.intra_group_arrow() {
        return Err(FoldingError::IntraGroupArrow { group, i, j });
    }
    let space = GroupMutationSpace { groups: fq.num_groups(), convention };
    let (ex, failure) = explore(&space, fq.clone(), Limits::states(cap.max(1)));
    if let Some(f) = failure {
        let word = f.word(&ex);
        return Err(match f.error {
            FoldingError::IntraGroupArrow { group, i, j } => FoldingError::FoldingBroken { word, group, i, j },
            other => other,
        });
    }
    let mut keys: Vec<CanonicalKey> = ex.states.iter().map(|s| s.canonical_key_with(convention)).collect();
    keys.sort();
    let class = FoldedClass { keys, exhausted: ex.exhausted, convention };
    if ex.cap_hit {
        Err(FoldingError::CapExceeded(Box::new(class)))
    } else {
        Ok(class)
    }
}
