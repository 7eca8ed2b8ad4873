use serde::Serialize;

use super::{ClusterError, FoldedSeed, SeedMode};
use crate::folding::{FoldedQuiver, FoldingError, IsoConvention};
use crate::qcore::CanonicalKey;
use crate::search::{explore, Explored, Limits, Space, StepFailure};

struct SeedSpace {
    groups: usize,
    convention: IsoConvention,
}

impl Space for SeedSpace {
    type State = FoldedSeed;
    type Key = CanonicalKey;
    type Error = ClusterError;

    fn moves(&self) -> usize {
        self.groups
    }

    fn step(&self, fs: &FoldedSeed, g: usize) -> Result<Option<FoldedSeed>, ClusterError> {
        if fs.folded().is_group_frozen(g) {
            return Ok(None);
        }
        fs.group_mutate(g).map(Some)
    }

    fn key(&self, fs: &FoldedSeed) -> CanonicalKey {
        fs.key(self.convention)
    }

    fn same(&self, a: &FoldedSeed, b: &FoldedSeed) -> bool {
        a.equivalent(b, self.convention)
    }
}

fn with_word(f: StepFailure<ClusterError>, ex: &Explored<FoldedSeed>) -> ClusterError {
    let word = f.word(ex);
    match f.error {
        ClusterError::FoldedClusterViolation { group, nodes, .. } => {
            ClusterError::FoldedClusterViolation { word, group, nodes }
        }
        ClusterError::Folding(FoldingError::IntraGroupArrow { group, i, j }) => {
            ClusterError::Folding(FoldingError::FoldingBroken { word: ex.word_to(f.vertex), group, i, j })
        }
        e => e,
    }
}

fn run(
    fs: &FoldedSeed,
    limits: Limits,
    convention: IsoConvention,
) -> (Explored<FoldedSeed>, Option<ClusterError>) {
    let space = SeedSpace { groups: fs.folded().num_groups(), convention };
    let (ex, failure) = explore(&space, fs.clone(), limits);
    let err = failure.map(|f| with_word(f, &ex));
    (ex, err)
}

/// Seeds reachable by group mutations, up to seed equivalence.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    seeds: Vec<FoldedSeed>,
    neighbors: Vec<Vec<Option<usize>>>,
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    exhausted: bool,
    convention: IsoConvention,
}

impl ExchangeGraph {
    fn from_explored(ex: Explored<FoldedSeed>, convention: IsoConvention) -> Self {
        ExchangeGraph {
            seeds: ex.states,
            neighbors: ex.neighbors,
            parent: ex.parent,
            depth: ex.depth,
            exhausted: ex.exhausted,
            convention,
        }
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn convention(&self) -> IsoConvention {
        self.convention
    }

    pub fn mode(&self) -> SeedMode {
        self.seeds[0].mode()
    }

    pub fn base(&self) -> &FoldedSeed {
        &self.seeds[0]
    }

    pub fn seeds(&self) -> &[FoldedSeed] {
        &self.seeds
    }

    pub fn seed(&self, v: usize) -> &FoldedSeed {
        &self.seeds[v]
    }

    /// `neighbors(v)[g]` is the vertex reached by mutating group `g`.
    pub fn neighbors(&self, v: usize) -> &[Option<usize>] {
        &self.neighbors[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Group word along the BFS tree from the base to `v`.
    pub fn word_to(&self, mut v: usize) -> Vec<usize> {
        let mut word = Vec::new();
        while let Some((p, g)) = self.parent[v] {
            word.push(g);
            v = p;
        }
        word.reverse();
        word
    }

    pub fn unfrozen_groups(&self) -> Vec<usize> {
        self.seeds[0].folded().unfrozen_groups()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].iter().flatten().count()
    }

    pub fn is_regular(&self) -> bool {
        let k = self.unfrozen_groups().len();
        (0..self.len()).all(|v| self.degree(v) == k)
    }

    /// Edges `(u, g, v)` with `u < v`, one per half-edge seen from the smaller end.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (u, row) in self.neighbors.iter().enumerate() {
            for (g, &v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if u < v {
                        out.push((u, g, v));
                    }
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        let half: usize = (0..self.len()).map(|v| self.degree(v)).sum();
        half / 2
    }
}

pub fn enumerate_exchange_graph(fs: &FoldedSeed, cap: usize) -> Result<ExchangeGraph, ClusterError> {
    enumerate_exchange_graph_with(fs, cap, IsoConvention::GroupPermuting)
}

pub fn enumerate_exchange_graph_with(
    fs: &FoldedSeed,
    cap: usize,
    convention: IsoConvention,
) -> Result<ExchangeGraph, ClusterError> {
    let (ex, err) = run(fs, Limits::states(cap.max(1)), convention);
    if let Some(e) = err {
        return Err(e);
    }
    let cap_hit = ex.cap_hit;
    let g = ExchangeGraph::from_explored(ex, convention);
    if cap_hit {
        return Err(ClusterError::CapExceeded(Box::new(g)));
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ClusterCondition {
    Holds { clusters: usize },
    /// Every group word of length at most `depth` keeps groups uniform.
    HoldsUpTo { depth: usize },
    Fails { word: Vec<usize>, group: usize, nodes: (usize, usize) },
}

/// Explores the `ClusterFolded` seeds of `fq` looking for a group whose nodes
/// stop sharing a variable.
pub fn check_folded_cluster_condition(
    fq: &FoldedQuiver,
    depth_cap: usize,
    size_cap: usize,
) -> Result<ClusterCondition, ClusterError> {
    let fs = FoldedSeed::initial(fq.clone(), SeedMode::ClusterFolded);
    let limits = Limits { max_states: size_cap.max(1), max_depth: Some(depth_cap) };
    let (ex, err) = run(&fs, limits, IsoConvention::GroupPermuting);
    match err {
        Some(ClusterError::FoldedClusterViolation { word, group, nodes }) => {
            Ok(ClusterCondition::Fails { word, group, nodes })
        }
        Some(e) => Err(e),
        None if ex.exhausted => Ok(ClusterCondition::Holds { clusters: ex.states.len() }),
        None => {
            let depth = (0..ex.states.len()).filter(|&v| !ex.expanded[v]).map(|v| ex.depth[v]).min();
            Ok(ClusterCondition::HoldsUpTo { depth: depth.unwrap_or(depth_cap) })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RelationOrder {
    Order(usize),
    Unbounded(usize),
}

/// Smallest `p <= max_power` such that `word^p` returns the base seed to
/// its own equivalence class.
pub fn check_relation_order(fs: &FoldedSeed, word: &[usize], max_power: usize) -> Result<RelationOrder, ClusterError> {
    let mut s = fs.clone();
    for p in 1..=max_power {
        s = s.group_mutate_word(word)?;
        if s.equivalent(fs, IsoConvention::GroupPermuting) {
            return Ok(RelationOrder::Order(p));
        }
    }
    Ok(RelationOrder::Unbounded(max_power))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Duality {
    /// `bijection[g]` is the group of the second folding matched with group `g`
    /// (first match in lexicographic order); `reciprocal_bijection` is the
    /// first match whose group sizes satisfy `|G_i| |φ(G_i)| = const`.
    MatchUpTo {
        radius: usize,
        bijection: Vec<usize>,
        ratios_reciprocal: bool,
        reciprocal_bijection: Option<Vec<usize>>,
    },
    Mismatch { reason: String },
}

/// Compares the balls of the given radius around the base seeds of two
/// exchange graphs, with edges labelled by group and labels matched through
/// a bijection of groups.
pub fn check_duality_local(fa: &FoldedSeed, fb: &FoldedSeed, radius: usize) -> Result<Duality, ClusterError> {
    let ua = fa.folded().unfrozen_groups();
    let ub = fb.folded().unfrozen_groups();
    if ua.len() != ub.len() {
        return Ok(Duality::Mismatch {
            reason: format!("{} versus {} unfrozen groups", ua.len(), ub.len()),
        });
    }
    let limits = Limits { max_states: usize::MAX, max_depth: Some(radius) };
    let (ea, err) = run(fa, limits, IsoConvention::GroupFixing);
    if let Some(e) = err {
        return Err(e);
    }
    let (eb, err) = run(fb, limits, IsoConvention::GroupFixing);
    if let Some(e) = err {
        return Err(e);
    }
    if ea.states.len() != eb.states.len() {
        return Ok(Duality::Mismatch {
            reason: format!("balls have {} and {} seeds", ea.states.len(), eb.states.len()),
        });
    }
    let size_a: Vec<usize> = ua.iter().map(|&g| fa.folded().groups()[g].len()).collect();
    let size_b: Vec<usize> = ub.iter().map(|&g| fb.folded().groups()[g].len()).collect();
    let to_full = |p: &[usize]| {
        let mut bijection = vec![usize::MAX; fa.folded().num_groups()];
        for (i, &j) in p.iter().enumerate() {
            bijection[ua[i]] = ub[j];
        }
        bijection
    };
    let reciprocal = |p: &[usize]| {
        let products: Vec<usize> = (0..p.len()).map(|i| size_a[i] * size_b[p[i]]).collect();
        products.windows(2).all(|w| w[0] == w[1])
    };
    let mut first: Option<Vec<usize>> = None;
    let mut first_reciprocal = None;
    let mut first_failure = None;
    for p in permutations(ua.len()) {
        let phi: Vec<(usize, usize)> = (0..p.len()).map(|i| (ua[i], ub[p[i]])).collect();
        match balls_match(&ea, &eb, &phi) {
            Ok(()) => {
                if reciprocal(&p) {
                    first_reciprocal = Some(to_full(&p));
                }
                first.get_or_insert(p);
                if first_reciprocal.is_some() {
                    break;
                }
            }
            Err(word) => {
                first_failure.get_or_insert(word);
            }
        }
    }
    match first {
        Some(p) => Ok(Duality::MatchUpTo {
            radius,
            ratios_reciprocal: reciprocal(&p),
            bijection: to_full(&p),
            reciprocal_bijection: first_reciprocal,
        }),
        None => {
            let word = first_failure.unwrap_or_default();
            Ok(Duality::Mismatch {
                reason: format!("no group bijection matches the balls; identity fails after {word:?}"),
            })
        }
    }
}

/// Simultaneous BFS from both bases; `Err` carries the word where it breaks.
fn balls_match(
    a: &Explored<FoldedSeed>,
    b: &Explored<FoldedSeed>,
    phi: &[(usize, usize)],
) -> Result<(), Vec<usize>> {
    let n = a.states.len();
    let mut fwd = vec![usize::MAX; n];
    let mut back = vec![usize::MAX; n];
    fwd[0] = 0;
    back[0] = 0;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let v = fwd[u];
        if a.expanded[u] != b.expanded[v] || a.depth[u] != b.depth[v] {
            return Err(a.word_to(u));
        }
        if !a.expanded[u] {
            continue;
        }
        for &(g, h) in phi {
            let (nu, nv) = match (a.neighbors[u][g], b.neighbors[v][h]) {
                (Some(x), Some(y)) => (x, y),
                (None, None) => continue,
                _ => {
                    let mut w = a.word_to(u);
                    w.push(g);
                    return Err(w);
                }
            };
            if fwd[nu] == usize::MAX && back[nv] == usize::MAX {
                fwd[nu] = nv;
                back[nv] = nu;
                queue.push_back(nu);
            } else if fwd[nu] != nv || back[nv] != nu {
                let mut w = a.word_to(u);
                w.push(g);
                return Err(w);
            }
        }
    }
    Ok(())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(k, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut cur, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Quiver;

    fn a2() -> FoldedSeed {
        let q = Quiver::from_arrows(2, &[(0, 1, 1)]).unwrap();
        FoldedSeed::initial(FoldedQuiver::unfolded(q), SeedMode::Unfolded)
    }

    fn a3_fold() -> FoldedQuiver {
        let q = Quiver::from_arrows(3, &[(0, 1, 1), (2, 1, 1)]).unwrap();
        FoldedQuiver::new(q, vec![vec![0, 2], vec![1]]).unwrap()
    }

    #[test]
    fn a2_is_a_pentagon() {
        let g = enumerate_exchange_graph(&a2(), 100).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.num_edges(), 5);
        assert!(g.is_regular());
        assert_eq!(g.word_to(4).len(), 2);
    }

    #[test]
    fn labelled_a2_doubles() {
        let g = enumerate_exchange_graph_with(&a2(), 100, IsoConvention::GroupFixing).unwrap();
        assert_eq!(g.len(), 10);
    }

    #[test]
    fn a3_fold_is_a_hexagon() {
        let fs = FoldedSeed::initial(a3_fold(), SeedMode::ClusterFolded);
        let g = enumerate_exchange_graph(&fs, 100).unwrap();
        assert_eq!((g.len(), g.num_edges()), (6, 6));
        assert_eq!(check_relation_order(&fs, &[0, 1], 10).unwrap(), RelationOrder::Order(3));
        assert_eq!(check_relation_order(&fs, &[0], 10).unwrap(), RelationOrder::Order(2));
    }

    #[test]
    fn cap_is_reported() {
        let fs = FoldedSeed::initial(a3_fold(), SeedMode::ClusterFolded);
        match enumerate_exchange_graph(&fs, 4) {
            Err(ClusterError::CapExceeded(g)) => assert_eq!(g.len(), 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn broken_folding_is_an_error() {
        // 0 -> 1 -> 2 with outer nodes grouped: mutating node 1 joins them
        let q = Quiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let fq = FoldedQuiver::new(q, vec![vec![0, 2], vec![1]]).unwrap();
        match check_folded_cluster_condition(&fq, 10, 1000) {
            Err(ClusterError::Folding(FoldingError::FoldingBroken { word, group: 0, .. })) => assert_eq!(word, vec![1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn condition_holds_for_a3_fold() {
        assert_eq!(check_folded_cluster_condition(&a3_fold(), 10, 1000).unwrap(), ClusterCondition::Holds { clusters: 6 });
        assert_eq!(check_folded_cluster_condition(&a3_fold(), 1, 1000).unwrap(), ClusterCondition::HoldsUpTo { depth: 1 });
    }

    #[test]
    fn self_duality_uses_identity() {
        let fs = FoldedSeed::initial(a3_fold(), SeedMode::ClusterFolded);
        match check_duality_local(&fs, &fs, 4).unwrap() {
            Duality::MatchUpTo { bijection, .. } => assert_eq!(bijection, vec![0, 1]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rank_mismatch() {
        let fs = FoldedSeed::initial(a3_fold(), SeedMode::ClusterFolded);
        let q = Quiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let other = FoldedSeed::initial(FoldedQuiver::unfolded(q), SeedMode::Unfolded);
        assert!(matches!(check_duality_local(&fs, &other, 2).unwrap(), Duality::Mismatch { .. }));
    }
}
