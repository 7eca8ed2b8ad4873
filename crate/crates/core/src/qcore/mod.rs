//! Quivers as skew-symmetric exchange matrices.
//!
//! `b[i][j]` counts arrows `i -> j` minus arrows `j -> i`. Mutation uses the
//! closed matrix formula, which agrees with the two-step arrow rule (compose
//! paths through `k`, cancel 2-cycles, reverse arrows at `k`).

mod canon;
mod class;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use canon::{canonical_labeling, ColoredGraph};
pub use canon::CanonicalKey;
pub use class::{enumerate_class, is_mutation_equivalent, Equivalence, MutationClass};

#[derive(Debug, Error)]
pub enum QuiverError {
    #[error("node {0} is frozen and cannot be mutated")]
    FrozenNodeMutation(usize),
    #[error("node index {index} out of range for a quiver on {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("exchange matrix is not skew-symmetric at ({i}, {j})")]
    NotSkewSymmetric { i: usize, j: usize },
    #[error("exchange matrix must be square with {n} rows")]
    BadShape { n: usize },
    #[error("exchange matrix entry overflowed 64 bits")]
    Overflow,
    #[error("permutation is not a bijection of {0} nodes")]
    BadPermutation(usize),
    #[error("mutation class exceeded the cap of {} quivers", .0.keys.len())]
    CapExceeded(Box<MutationClass>),
    #[error("quivers have different node counts ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("invalid quiver json: {0}")]
    Json(String),
}

/// Exchange data on labelled nodes `0..n` with a frozen subset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    n: usize,
    b: Vec<i64>,
    frozen: Vec<bool>,
}

impl Quiver {
    /// Quiver with no arrows and nothing frozen.
    pub fn empty(n: usize) -> Self {
        Quiver { n, b: vec![0; n * n], frozen: vec![false; n] }
    }

    pub fn from_matrix(rows: &[Vec<i64>], frozen: &[usize]) -> Result<Self, QuiverError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(QuiverError::BadShape { n });
        }
        let mut q = Quiver::empty(n);
        for i in 0..n {
            for j in 0..n {
                if rows[i][j].checked_neg() != Some(rows[j][i]) {
                    return Err(QuiverError::NotSkewSymmetric { i, j });
                }
                q.b[i * n + j] = rows[i][j];
            }
        }
        q.set_frozen(frozen)?;
        Ok(q)
    }

    /// Builds a quiver from `(source, target, multiplicity)` triples; opposite
    /// arrows cancel.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, i64)]) -> Result<Self, QuiverError> {
        let mut q = Quiver::empty(n);
        for &(i, j, m) in arrows {
            q.check_index(i)?;
            q.check_index(j)?;
            if i == j {
                return Err(QuiverError::NotSkewSymmetric { i, j });
            }
            let v = q.b[i * n + j].checked_add(m).ok_or(QuiverError::Overflow)?;
            q.b[i * n + j] = v;
            q.b[j * n + i] = v.checked_neg().ok_or(QuiverError::Overflow)?;
        }
        Ok(q)
    }

    pub fn with_frozen(mut self, frozen: &[usize]) -> Result<Self, QuiverError> {
        self.set_frozen(frozen)?;
        Ok(self)
    }

    fn set_frozen(&mut self, frozen: &[usize]) -> Result<(), QuiverError> {
        for &f in frozen {
            self.check_index(f)?;
            self.frozen[f] = true;
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<(), QuiverError> {
        if i < self.n {
            Ok(())
        } else {
            Err(QuiverError::IndexOutOfRange { index: i, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn b(&self, i: usize, j: usize) -> i64 {
        self.b[i * self.n + j]
    }

    /// Number of arrows `i -> j`.
    #[inline]
    pub fn arrows(&self, i: usize, j: usize) -> i64 {
        self.b(i, j).max(0)
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.frozen[i]).collect()
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.b.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// All arrows as `(source, target, multiplicity)` with positive multiplicity.
    pub fn arrow_list(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.b(i, j) > 0 {
                    out.push((i, j, self.b(i, j)));
                }
            }
        }
        out
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.b(i, i) == 0 && (0..self.n).all(|j| self.b(i, j).checked_neg() == Some(self.b(j, i)))
        })
    }

    /// Matrix mutation at `k`. The input is left untouched.
    pub fn mutate(&self, k: usize) -> Result<Quiver, QuiverError> {
        self.check_index(k)?;
        if self.frozen[k] {
            return Err(QuiverError::FrozenNodeMutation(k));
        }
        self.mutate_unchecked_frozen(k)
    }

    /// Mutation that ignores the frozen flag; used for group mutation where
    /// frozen status is checked at the group level.
    pub(crate) fn mutate_unchecked_frozen(&self, k: usize) -> Result<Quiver, QuiverError> {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let v = if i == k || j == k {
                    -self.b(i, j)
                } else {
                    let bik = self.b(i, k);
                    let bkj = self.b(k, j);
                    let prod = bik.checked_mul(bkj).ok_or(QuiverError::Overflow)?;
                    if prod > 0 {
                        self.b(i, j)
                            .checked_add(bik.signum() * prod)
                            .ok_or(QuiverError::Overflow)?
                    } else {
                        self.b(i, j)
                    }
                };
                if v == i64::MIN {
                    return Err(QuiverError::Overflow);
                }
                out.b[i * n + j] = v;
                out.b[j * n + i] = -v;
            }
        }
        Ok(out)
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Quiver, QuiverError> {
        if !is_permutation(perm, self.n) {
            return Err(QuiverError::BadPermutation(self.n));
        }
        let n = self.n;
        let mut out = Quiver::empty(n);
        for i in 0..n {
            out.frozen[perm[i]] = self.frozen[i];
            for j in 0..n {
                out.b[perm[i] * n + perm[j]] = self.b(i, j);
            }
        }
        Ok(out)
    }

    /// Canonical key: equal for two quivers exactly when a frozen-preserving
    /// relabelling maps one onto the other.
    pub fn canonical(&self) -> CanonicalKey {
        canonical_labeling(&self.colored_graph()).key
    }

    /// Canonical key together with the canonical node order
    /// (`order[p]` is the node placed at position `p`).
    pub fn canonical_order(&self) -> (CanonicalKey, Vec<usize>) {
        let l = canonical_labeling(&self.colored_graph());
        (l.key, l.order)
    }

    /// Generators of the automorphism group (node permutations `sigma` with
    /// `b[sigma i][sigma j] = b[i][j]`, preserving frozen status).
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        canonical_labeling(&self.colored_graph()).generators
    }

    pub fn is_automorphism(&self, sigma: &[usize]) -> bool {
        is_permutation(sigma, self.n)
            && (0..self.n).all(|i| {
                self.frozen[i] == self.frozen[sigma[i]]
                    && (0..self.n).all(|j| self.b(sigma[i], sigma[j]) == self.b(i, j))
            })
    }

    fn colored_graph(&self) -> ColoredGraph {
        let colors = self.frozen.iter().map(|&f| f as u64).collect();
        let adj = self.b.iter().map(|&v| v as i128).collect();
        ColoredGraph { colors, adj }
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson { n: Some(self.n), b: Some(self.rows()), frozen: self.frozen(), arrows: None }
    }

    pub fn from_json(j: &QuiverJson) -> Result<Self, QuiverError> {
        match (&j.b, &j.arrows) {
            (Some(rows), _) => {
                if let Some(n) = j.n {
                    if n != rows.len() {
                        return Err(QuiverError::BadShape { n });
                    }
                }
                Quiver::from_matrix(rows, &j.frozen)
            }
            (None, Some(arrows)) => {
                let mut n = j.n.unwrap_or(0);
                let mut triples = Vec::with_capacity(arrows.len());
                for a in arrows {
                    let (s, t, m) = match a.as_slice() {
                        [s, t] => (*s, *t, 1),
                        [s, t, m] => (*s, *t, *m),
                        _ => return Err(QuiverError::Json("arrows must be [i, j] or [i, j, mult]".into())),
                    };
                    if s < 0 || t < 0 {
                        return Err(QuiverError::Json("negative node index".into()));
                    }
                    if j.n.is_none() {
                        n = n.max(s as usize + 1).max(t as usize + 1);
                    }
                    triples.push((s as usize, t as usize, m));
                }
                Quiver::from_arrows(n, &triples)?.with_frozen(&j.frozen)
            }
            (None, None) => Err(QuiverError::Json("expected \"b\" or \"arrows\"".into())),
        }
    }

    pub fn parse_json(text: &str) -> Result<Self, QuiverError> {
        let j: QuiverJson = serde_json::from_str(text).map_err(|e| QuiverError::Json(e.to_string()))?;
        Quiver::from_json(&j)
    }
}

impl fmt::Debug for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quiver(n={}, arrows={:?}", self.n, self.arrow_list())?;
        if self.frozen.iter().any(|&x| x) {
            write!(f, ", frozen={:?}", self.frozen())?;
        }
        write!(f, ")")
    }
}

/// Serialized quiver: `{"n", "b", "frozen"}` or `{"arrows": [[i, j, mult]]}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QuiverJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub frozen: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<Vec<i64>>>,
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize, arrows: &[(usize, usize, i64)]) -> Quiver {
        Quiver::from_arrows(n, arrows).unwrap()
    }

    #[test]
    fn single_arrow_reverses() {
        let a = q(2, &[(0, 1, 1)]);
        assert_eq!(a.mutate(0).unwrap(), q(2, &[(1, 0, 1)]));
    }

    #[test]
    fn path_mutation_at_middle() {
        // 1 -> 2 -> 3 at node 2 gives 2 -> 1, 3 -> 2, 1 -> 3
        let a = q(3, &[(0, 1, 1), (1, 2, 1)]);
        assert_eq!(a.mutate(1).unwrap(), q(3, &[(1, 0, 1), (2, 1, 1), (0, 2, 1)]));
    }

    #[test]
    fn two_cycles_cancel() {
        // 0 -> 1 -> 2 with 2 -> 0: composing through 1 cancels the arrow 2 -> 0
        let a = q(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]);
        let m = a.mutate(1).unwrap();
        assert_eq!(m.b(0, 2), 0);
        assert_eq!(m, q(3, &[(1, 0, 1), (2, 1, 1)]));
    }

    #[test]
    fn frozen_and_range_errors() {
        let a = q(2, &[(0, 1, 1)]).with_frozen(&[1]).unwrap();
        assert!(matches!(a.mutate(1), Err(QuiverError::FrozenNodeMutation(1))));
        assert!(matches!(a.mutate(5), Err(QuiverError::IndexOutOfRange { index: 5, n: 2 })));
    }

    #[test]
    fn rejects_non_skew_matrix() {
        let err = Quiver::from_matrix(&[vec![0, 1], vec![1, 0]], &[]).unwrap_err();
        assert!(matches!(err, QuiverError::NotSkewSymmetric { .. }));
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2;
        let a = q(3, &[(0, 1, big), (1, 2, big)]);
        assert!(matches!(a.mutate(1), Err(QuiverError::Overflow)));
    }

    #[test]
    fn json_forms() {
        let a = Quiver::parse_json(r#"{"arrows": [[0, 1, 2], [1, 2]], "frozen": [2]}"#).unwrap();
        assert_eq!(a.n(), 3);
        assert_eq!(a.b(0, 1), 2);
        assert_eq!(a.b(2, 1), -1);
        assert_eq!(a.frozen(), vec![2]);
        let text = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(text, r#"{"n":3,"b":[[0,2,0],[-2,0,1],[0,-1,0]],"frozen":[2]}"#);
        assert_eq!(Quiver::parse_json(&text).unwrap(), a);
    }
}
