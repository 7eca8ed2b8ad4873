//! Level-synchronous breadth-first exploration shared by every enumerator.
//!
//! A frontier level is expanded in parallel; the resulting states are merged
//! sequentially in (vertex id, move) order, so vertex ids, parents and the
//! final vertex set do not depend on scheduling.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;

pub(crate) trait Space: Sync {
    type State: Send + Sync;
    type Key: Hash + Eq + Send;
    type Error: Send;

    /// Number of move labels available from every state.
    fn moves(&self) -> usize;

    /// `Ok(None)` marks a move that does not apply (for instance a frozen group).
    fn step(&self, state: &Self::State, mv: usize) -> Result<Option<Self::State>, Self::Error>;

    fn key(&self, state: &Self::State) -> Self::Key;

    /// Exact confirmation for states whose keys collide.
    fn same(&self, _a: &Self::State, _b: &Self::State) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub max_states: usize,
    pub max_depth: Option<usize>,
}

impl Limits {
    pub fn states(max_states: usize) -> Self {
        Limits { max_states, max_depth: None }
    }
}

#[derive(Debug)]
pub(crate) struct Explored<S> {
    pub states: Vec<S>,
    pub parent: Vec<Option<(usize, usize)>>,
    pub depth: Vec<usize>,
    /// `neighbors[v][mv]`; `None` when the move is inapplicable or `v` was
    /// never expanded.
    pub neighbors: Vec<Vec<Option<usize>>>,
    pub expanded: Vec<bool>,
    pub exhausted: bool,
    pub cap_hit: bool,
}

impl<S> Explored<S> {
    /// Move labels leading from the start state to `v` along the BFS tree.
    pub fn word_to(&self, mut v: usize) -> Vec<usize> {
        let mut word = Vec::new();
        while let Some((p, mv)) = self.parent[v] {
            word.push(mv);
            v = p;
        }
        word.reverse();
        word
    }
}

#[derive(Debug)]
pub(crate) struct StepFailure<E> {
    pub vertex: usize,
    pub mv: usize,
    pub error: E,
}

impl<E> StepFailure<E> {
    pub fn word<S>(&self, explored: &Explored<S>) -> Vec<usize> {
        let mut w = explored.word_to(self.vertex);
        w.push(self.mv);
        w
    }
}

pub(crate) fn explore<Sp: Space>(
    space: &Sp,
    start: Sp::State,
    limits: Limits,
) -> (Explored<Sp::State>, Option<StepFailure<Sp::Error>>) {
    let moves = space.moves();
    let mut index: HashMap<Sp::Key, Vec<usize>> = HashMap::new();
    index.entry(space.key(&start)).or_default().push(0);
    let mut ex = Explored {
        states: vec![start],
        parent: vec![None],
        depth: vec![0],
        neighbors: vec![vec![None; moves]],
        expanded: vec![false],
        exhausted: false,
        cap_hit: false,
    };
    let mut frontier = vec![0usize];
    let mut level = 0usize;

    while !frontier.is_empty() {
        if limits.max_depth.is_some_and(|d| level >= d) {
            return (ex, None);
        }
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&v| (0..moves).map(move |mv| (v, mv)))
            .collect();
        let results: Vec<Result<Option<(Sp::State, Sp::Key)>, Sp::Error>> = jobs
            .par_iter()
            .map(|&(v, mv)| {
                space
                    .step(&ex.states[v], mv)
                    .map(|next| next.map(|s| {
                        let k = space.key(&s);
                        (s, k)
                    }))
            })
            .collect();

        let mut next_frontier = Vec::new();
        for (&(v, mv), result) in jobs.iter().zip(results) {
            let (state, key) = match result {
                Err(error) => return (ex, Some(StepFailure { vertex: v, mv, error })),
                Ok(None) => continue,
                Ok(Some(pair)) => pair,
            };
            let bucket = index.entry(key).or_default();
            let found = bucket.iter().copied().find(|&u| space.same(&ex.states[u], &state));
            let id = match found {
                Some(u) => u,
                None => {
                    if ex.states.len() >= limits.max_states {
                        ex.cap_hit = true;
                        return (ex, None);
                    }
                    let id = ex.states.len();
                    bucket.push(id);
                    ex.states.push(state);
                    ex.parent.push(Some((v, mv)));
                    ex.depth.push(level + 1);
                    ex.neighbors.push(vec![None; moves]);
                    ex.expanded.push(false);
                    next_frontier.push(id);
                    id
                }
            };
            ex.neighbors[v][mv] = Some(id);
        }
        for &v in &frontier {
            ex.expanded[v] = true;
        }
        frontier = next_frontier;
        level += 1;
    }
    ex.exhausted = true;
    (ex, None)
}
