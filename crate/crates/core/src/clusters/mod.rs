//! Seeds, folded seeds and everything built from their exchange graphs.
//!
//! A folded seed lives in one of three modes. In `ClusterFolded` mode every
//! group starts with a single shared generator and group mutation insists
//! that all nodes of the group keep sharing a variable. In `Unfolded` mode
//! every node carries its own generator and group mutation is plain
//! sequential seed mutation. `GVectors` mode walks the same seeds as
//! `Unfolded` but records each variable by its g-vector `g` as the Laurent
//! monomial `x^g`; on quivers a cluster variable is determined by its
//! g-vector, so the exchange graph is the same and no polynomial ever grows.

mod complex;
mod export;
mod graph;
mod tropical;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::folding::{FoldedQuiver, FoldingError, IsoConvention};
use crate::qcore::{canonical_labeling, CanonicalKey, Quiver, QuiverError};
use crate::symalg::{exchange_step, RationalFunction, SymalgError};
use tropical::Tropical;

pub use complex::{cluster_complex, cluster_variable_census, exchange_two_faces, Census, ClusterComplex, TwoFaces};
pub use export::{to_dot, to_json, ExchangeGraphJson};
pub use graph::{
    check_duality_local, check_folded_cluster_condition, check_relation_order, enumerate_exchange_graph,
    enumerate_exchange_graph_with, ClusterCondition, Duality, ExchangeGraph, RelationOrder,
};

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error(transparent)]
    Folding(#[from] FoldingError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Symalg(#[from] SymalgError),
    #[error("node {0} is frozen")]
    FrozenNode(usize),
    #[error("expected {expected} variables, got {got}")]
    BadVariables { expected: usize, got: usize },
    #[error("folded cluster condition fails after {word:?}: nodes {} and {} of group {group} differ", .nodes.0, .nodes.1)]
    FoldedClusterViolation { word: Vec<usize>, group: usize, nodes: (usize, usize) },
    #[error("exchange graph exceeded the cap of {} seeds", .0.len())]
    CapExceeded(Box<ExchangeGraph>),
    #[error("exchange graph was not exhausted")]
    GraphNotExhausted,
    #[error("at least two unfrozen groups are needed")]
    NotEnoughGroups,
}

/// A quiver with one variable per node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Seed {
    quiver: Quiver,
    vars: Vec<RationalFunction>,
}

impl Seed {
    /// Generators `x1..xn` on the nodes of `quiver`.
    pub fn initial(quiver: Quiver) -> Self {
        let n = quiver.n();
        let vars = (0..n).map(|i| RationalFunction::var(n, i)).collect();
        Seed { quiver, vars }
    }

    pub fn new(quiver: Quiver, vars: Vec<RationalFunction>) -> Result<Self, ClusterError> {
        if vars.len() != quiver.n() {
            return Err(ClusterError::BadVariables { expected: quiver.n(), got: vars.len() });
        }
        Ok(Seed { quiver, vars })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vars(&self) -> &[RationalFunction] {
        &self.vars
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, ClusterError> {
        if k < self.quiver.n() && self.quiver.is_frozen(k) {
            return Err(ClusterError::FrozenNode(k));
        }
        let quiver = self.quiver.mutate(k)?;
        let mut vars = self.vars.clone();
        vars[k] = exchange(&self.quiver, &self.vars, k)?;
        Ok(Seed { quiver, vars })
    }

    pub fn mutate_word(&self, word: &[usize]) -> Result<Seed, ClusterError> {
        let mut s = self.clone();
        for &k in word {
            s = s.mutate(k)?;
        }
        Ok(s)
    }
}

pub fn mutate_seed(s: &Seed, k: usize) -> Result<Seed, ClusterError> {
    s.mutate(k)
}

/// New variable at `k`, arrows counted with multiplicity before mutation.
fn exchange(q: &Quiver, vars: &[RationalFunction], k: usize) -> Result<RationalFunction, SymalgError> {
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    for i in 0..q.n() {
        let b = q.b(i, k);
        for _ in 0..b.unsigned_abs() {
            if b > 0 {
                ins.push(&vars[i]);
            } else {
                outs.push(&vars[i]);
            }
        }
    }
    exchange_step(&vars[k], &ins, &outs)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum SeedMode {
    /// One generator per group, shared by all of its nodes.
    #[default]
    ClusterFolded,
    /// One generator per node.
    Unfolded,
    /// As `Unfolded`, with every variable replaced by `x^g` for its g-vector `g`.
    GVectors,
}

/// A folded quiver with a variable on every node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FoldedSeed {
    folded: FoldedQuiver,
    mode: SeedMode,
    vars: Vec<RationalFunction>,
    tropical: Option<Tropical>,
}

impl FoldedSeed {
    /// Initial seed: generator `x_{g+1}` on every node of group `g`
    /// (`ClusterFolded`) or `x_{i+1}` on node `i` (`Unfolded`).
    pub fn initial(folded: FoldedQuiver, mode: SeedMode) -> Self {
        let n = folded.quiver().n();
        let vars = match mode {
            SeedMode::ClusterFolded => {
                let k = folded.num_groups();
                (0..n).map(|i| RationalFunction::var(k, folded.group_of(i))).collect()
            }
            SeedMode::Unfolded | SeedMode::GVectors => (0..n).map(|i| RationalFunction::var(n, i)).collect(),
        };
        let tropical = (mode == SeedMode::GVectors).then(|| Tropical::initial(folded.quiver()));
        FoldedSeed { folded, mode, vars, tropical }
    }

    pub fn folded(&self) -> &FoldedQuiver {
        &self.folded
    }

    pub fn quiver(&self) -> &Quiver {
        self.folded.quiver()
    }

    pub fn mode(&self) -> SeedMode {
        self.mode
    }

    /// Variable on every node.
    pub fn vars(&self) -> &[RationalFunction] {
        &self.vars
    }

    /// Variables of the nodes of each group.
    pub fn group_vars(&self) -> Vec<Vec<RationalFunction>> {
        self.folded.groups().iter().map(|g| g.iter().map(|&v| self.vars[v].clone()).collect()).collect()
    }

    /// Shared variable of group `g` (the first node's variable in `Unfolded` mode).
    pub fn group_var(&self, g: usize) -> &RationalFunction {
        &self.vars[self.folded.groups()[g][0]]
    }

    pub fn as_seed(&self) -> Seed {
        Seed { quiver: self.quiver().clone(), vars: self.vars.clone() }
    }

    /// Mutates every node of group `g`. In `ClusterFolded` mode the new
    /// variables must agree; the violation carries an empty word that callers
    /// extend with the path that led here.
    pub fn group_mutate(&self, g: usize) -> Result<FoldedSeed, ClusterError> {
        let folded = self.folded.group_mutate(g)?;
        let q = self.quiver();
        let mut vars = self.vars.clone();
        let members = &self.folded.groups()[g];
        if let Some(t) = &self.tropical {
            let n = q.n();
            let mut t = t.clone();
            let mut cur = q.clone();
            for &v in members {
                t = t.mutate(&cur, v);
                cur = cur.mutate(v)?;
                vars[v] = t.variable(n, v);
            }
            return Ok(FoldedSeed { folded, mode: self.mode, vars, tropical: Some(t) });
        }
        // no arrows inside the group, so every new variable can be read off the old seed
        for &v in members {
            vars[v] = exchange(q, &self.vars, v)?;
        }
        if self.mode == SeedMode::ClusterFolded {
            let first = members[0];
            if let Some(&other) = members.iter().find(|&&v| vars[v] != vars[first]) {
                return Err(ClusterError::FoldedClusterViolation { word: vec![g], group: g, nodes: (first, other) });
            }
        }
        Ok(FoldedSeed { folded, mode: self.mode, vars, tropical: None })
    }

    pub fn group_mutate_word(&self, word: &[usize]) -> Result<FoldedSeed, ClusterError> {
        let mut s = self.clone();
        for (pos, &g) in word.iter().enumerate() {
            s = s.group_mutate(g).map_err(|e| match e {
                ClusterError::FoldedClusterViolation { group, nodes, .. } => {
                    ClusterError::FoldedClusterViolation { word: word[..=pos].to_vec(), group, nodes }
                }
                e => e,
            })?;
        }
        Ok(s)
    }

    /// Canonical key of the folded quiver with nodes coloured by their variables.
    pub fn key(&self, convention: IsoConvention) -> CanonicalKey {
        canonical_labeling(&self.colored(convention)).key
    }

    fn colored(&self, convention: IsoConvention) -> crate::qcore::ColoredGraph {
        let colors: Vec<u64> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| ((var_hash(v) >> 3) << 1) | self.quiver().is_frozen(i) as u64)
            .collect();
        self.folded.colored_graph(&colors, convention)
    }

    /// Exact seed equivalence: a relabelling carrying quiver, groups and
    /// variables onto each other.
    pub fn equivalent(&self, other: &FoldedSeed, convention: IsoConvention) -> bool {
        if self.vars.len() != other.vars.len() || self.folded.num_groups() != other.folded.num_groups() {
            return false;
        }
        let a = canonical_labeling(&self.colored(convention));
        let b = canonical_labeling(&other.colored(convention));
        if a.key != b.key {
            return false;
        }
        let n = self.vars.len();
        a.order.iter().zip(&b.order).all(|(&u, &v)| u >= n || self.vars[u] == other.vars[v])
    }
}

fn var_hash(v: &RationalFunction) -> u64 {
    let mut h = DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

pub fn group_mutate_seed(fs: &FoldedSeed, g: usize) -> Result<FoldedSeed, ClusterError> {
    fs.group_mutate(g)
}
