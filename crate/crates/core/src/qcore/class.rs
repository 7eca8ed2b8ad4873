//! Mutation classes: closure under mutation up to frozen-preserving relabelling.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{CanonicalKey, Quiver, QuiverError};
use crate::search::{explore, Limits, Space};

/// Canonical keys of a mutation class in ascending key order, each paired with
/// its canonically relabelled representative.
#[derive(Clone, Debug, Serialize)]
pub struct MutationClass {
    pub keys: Vec<CanonicalKey>,
    #[serde(skip)]
    pub representatives: Vec<Quiver>,
    pub exhausted: bool,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, q: &Quiver) -> bool {
        self.keys.binary_search(&q.canonical()).is_ok()
    }
}

struct MutationSpace {
    n: usize,
}

impl Space for MutationSpace {
    type State = Quiver;
    type Key = CanonicalKey;
    type Error = QuiverError;

    fn moves(&self) -> usize {
        self.n
    }

    fn step(&self, q: &Quiver, k: usize) -> Result<Option<Quiver>, QuiverError> {
        if q.is_frozen(k) {
            return Ok(None);
        }
        q.mutate(k).map(Some)
    }

    fn key(&self, q: &Quiver) -> CanonicalKey {
        q.canonical()
    }
}

/// Breadth-first closure of `q` under mutation at every unfrozen node,
/// deduplicated by canonical key. Fails with [`QuiverError::CapExceeded`]
/// (carrying the partial class) once more than `cap` classes are found.
pub fn enumerate_class(q: &Quiver, cap: usize) -> Result<MutationClass, QuiverError> {
    let space = MutationSpace { n: q.n() };
    let (ex, failure) = explore(&space, q.clone(), Limits::states(cap.max(1)));
    if let Some(f) = failure {
        return Err(f.error);
    }
    let mut pairs: Vec<(CanonicalKey, Quiver)> = ex
        .states
        .par_iter()
        .map(|s| {
            let (key, order) = s.canonical_order();
            let mut perm = vec![0; order.len()];
            for (p, &v) in order.iter().enumerate() {
                perm[v] = p;
            }
            (key, s.permuted(&perm).expect("canonical order is a permutation"))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (keys, representatives) = pairs.into_iter().unzip();
    let class = MutationClass { keys, representatives, exhausted: ex.exhausted };
    if ex.cap_hit {
        Err(QuiverError::CapExceeded(Box::new(class)))
    } else {
        Ok(class)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Yes,
    /// One side's class was exhausted without meeting the other.
    No { exhausted_size: usize },
    /// The cap was reached before either outcome was certain.
    Unknown { visited: usize },
}

struct Side {
    seen: HashSet<CanonicalKey>,
    frontier: Vec<Quiver>,
}

impl Side {
    fn new(q: &Quiver) -> Self {
        Side { seen: HashSet::from([q.canonical()]), frontier: vec![q.clone()] }
    }
}

/// Bounded bidirectional search for a mutation sequence between two quivers.
pub fn is_mutation_equivalent(a: &Quiver, b: &Quiver, cap: usize) -> Result<Equivalence, QuiverError> {
    if a.n() != b.n() {
        return Err(QuiverError::SizeMismatch(a.n(), b.n()));
    }
    let mut sides = [Side::new(a), Side::new(b)];
    if sides[0].seen.iter().any(|k| sides[1].seen.contains(k)) {
        return Ok(Equivalence::Yes);
    }
    loop {
        let pick = if sides[0].frontier.len() <= sides[1].frontier.len() { 0 } else { 1 };
        let (this, other) = if pick == 0 {
            let (x, y) = sides.split_at_mut(1);
            (&mut x[0], &y[0])
        } else {
            let (x, y) = sides.split_at_mut(1);
            (&mut y[0], &x[0])
        };
        let expanded: Vec<Result<Vec<(CanonicalKey, Quiver)>, QuiverError>> = this
            .frontier
            .par_iter()
            .map(|q| {
                (0..q.n())
                    .filter(|&k| !q.is_frozen(k))
                    .map(|k| q.mutate(k).map(|m| (m.canonical(), m)))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for batch in expanded {
            for (key, m) in batch? {
                if other.seen.contains(&key) {
                    return Ok(Equivalence::Yes);
                }
                if this.seen.insert(key) {
                    next.push(m);
                }
            }
        }
        if next.is_empty() {
            return Ok(Equivalence::No { exhausted_size: this.seen.len() });
        }
        this.frontier = next;
        let visited = sides[0].seen.len() + sides[1].seen.len();
        if visited > cap {
            return Ok(Equivalence::Unknown { visited });
        }
    }
}
