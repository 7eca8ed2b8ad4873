//! Standard versus special foldings.
//!
//! A folding is standard when the group-level matrix `B̂[g][h] = Σ_{i∈g} b[i][j]`
//! is well defined (independent of `j ∈ h`), skew-symmetrizable, every node's
//! arrows to a group all point the same way, and group mutation of the quiver
//! agrees with matrix mutation of `B̂` across the whole folded class.

use num_integer::Integer;
use serde::Serialize;

use super::{FoldedQuiver, FoldingError, IsoConvention};
use crate::search::{explore, Limits, Space};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpecialReason {
    /// Column sums of block `(g, h)` differ between nodes of `h`.
    ColumnDependent { g: usize, h: usize },
    NotSkewSymmetrizable,
    /// Node `node` has arrows both to and from group `group`.
    MixedDirections { node: usize, group: usize },
    /// Group mutation at `group` disagrees with matrix mutation.
    MutationMismatch { group: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    Standard { matrix: Vec<Vec<i64>>, symmetrizer: Vec<i64>, class_size: usize },
    /// `word` reaches the folded quiver where `reason` is first observed.
    Special { word: Vec<usize>, reason: SpecialReason },
    /// No obstruction within the first `explored` folded quivers.
    Unknown { explored: usize },
}

/// Group-level exchange matrix, rows and columns indexed by group.
pub fn folded_matrix(fq: &FoldedQuiver) -> Result<Vec<Vec<i64>>, SpecialReason> {
    let q = fq.quiver();
    let k = fq.num_groups();
    let mut m = vec![vec![0i64; k]; k];
    for g in 0..k {
        for h in 0..k {
            if g == h {
                continue;
            }
            let mut value = None;
            for &j in &fq.groups()[h] {
                let s: i64 = fq.groups()[g].iter().map(|&i| q.b(i, j)).sum();
                match value {
                    None => value = Some(s),
                    Some(v) if v != s => return Err(SpecialReason::ColumnDependent { g, h }),
                    _ => {}
                }
            }
            m[g][h] = value.unwrap_or(0);
        }
    }
    Ok(m)
}

fn check_directions(fq: &FoldedQuiver) -> Result<(), SpecialReason> {
    let q = fq.quiver();
    for node in 0..q.n() {
        for (group, members) in fq.groups().iter().enumerate() {
            let out = members.iter().any(|&j| q.b(node, j) > 0);
            let inc = members.iter().any(|&j| q.b(node, j) < 0);
            if out && inc {
                return Err(SpecialReason::MixedDirections { node, group });
            }
        }
    }
    Ok(())
}

/// Matrix mutation at `k`.
pub fn mutate_matrix(m: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut out = m.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -m[i][j]
            } else {
                let prod = m[i][k] * m[k][j];
                m[i][j] + m[i][k].signum() * prod.max(0)
            };
        }
    }
    out
}

/// Smallest positive integer vector `d` with `d[i] m[i][j] = -d[j] m[j][i]`.
pub fn symmetrizer(m: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = m.len();
    // d[i] as a reduced fraction, assigned per connected component
    let mut d: Vec<Option<(i128, i128)>> = vec![None; n];
    for root in 0..n {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some((1, 1));
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let (p, q) = d[i].unwrap();
            for j in 0..n {
                let (a, b) = (m[i][j] as i128, m[j][i] as i128);
                if a == 0 && b == 0 {
                    continue;
                }
                if a == 0 || b == 0 || a.signum() == b.signum() {
                    return None;
                }
                // d[j] = d[i] * a / (-b)
                let (mut np, mut nq) = (p * a.abs(), q * b.abs());
                let g = np.gcd(&nq);
                np /= g;
                nq /= g;
                match d[j] {
                    None => {
                        d[j] = Some((np, nq));
                        stack.push(j);
                    }
                    Some(existing) if existing != (np, nq) => return None,
                    _ => {}
                }
            }
        }
    }
    let fracs: Vec<(i128, i128)> = d.into_iter().map(Option::unwrap).collect();
    let l = fracs.iter().fold(1i128, |acc, &(_, q)| acc.lcm(&q));
    let ints: Vec<i128> = fracs.iter().map(|&(p, q)| p * (l / q)).collect();
    // reduce each component separately so every component is primitive
    let mut comp = vec![usize::MAX; n];
    let mut out = ints.clone();
    for root in 0..n {
        if comp[root] != usize::MAX {
            continue;
        }
        let mut members = vec![root];
        comp[root] = root;
        let mut idx = 0;
        while idx < members.len() {
            let i = members[idx];
            idx += 1;
            for j in 0..n {
                if comp[j] == usize::MAX && (m[i][j] != 0 || m[j][i] != 0) {
                    comp[j] = root;
                    members.push(j);
                }
            }
        }
        let g = members.iter().fold(0i128, |acc, &i| acc.gcd(&ints[i]));
        for &i in &members {
            out[i] = ints[i] / g;
        }
    }
    out.into_iter().map(|v| i64::try_from(v).ok()).collect()
}

fn principal(m: &[Vec<i64>], keep: &[usize]) -> Vec<Vec<i64>> {
    keep.iter().map(|&i| keep.iter().map(|&j| m[i][j]).collect()).collect()
}

enum Stop {
    Special(SpecialReason),
    Folding(FoldingError),
}

struct ClassifySpace {
    groups: usize,
}

impl Space for ClassifySpace {
    type State = FoldedQuiver;
    type Key = crate::qcore::CanonicalKey;
    type Error = Stop;

    fn moves(&self) -> usize {
        self.groups
    }

    fn step(&self, fq: &FoldedQuiver, g: usize) -> Result<Option<FoldedQuiver>, Stop> {
        if fq.is_group_frozen(g) {
            return Ok(None);
        }
        let next = fq.group_mutate(g).map_err(Stop::Folding)?;
        if let Some((group, i, j)) = next.intra_group_arrow() {
            return Err(Stop::Folding(FoldingError::IntraGroupArrow { group, i, j }));
        }
        let before = folded_matrix(fq).map_err(Stop::Special)?;
        let after = folded_matrix(&next).map_err(Stop::Special)?;
        check_directions(&next).map_err(Stop::Special)?;
        if mutate_matrix(&before, g) != after {
            return Err(Stop::Special(SpecialReason::MutationMismatch { group: g }));
        }
        Ok(Some(next))
    }

    fn key(&self, fq: &FoldedQuiver) -> Self::Key {
        fq.canonical_key_with(IsoConvention::GroupPermuting)
    }
}

/// Classifies a folding by exploring its folded class (at most `cap` members).
/// Fails if the folding itself breaks along the way.
pub fn classify_folding(fq: &FoldedQuiver, cap: usize) -> Result<Classification, FoldingError> {
    if let Some((group, i, j)) = fq.intra_group_arrow() {
        return Err(FoldingError::IntraGroupArrow { group, i, j });
    }
    let matrix = match folded_matrix(fq).and_then(|m| check_directions(fq).map(|_| m)) {
        Ok(m) => m,
        Err(reason) => return Ok(Classification::Special { word: vec![], reason }),
    };
    let unfrozen = fq.unfrozen_groups();
    let Some(sym) = symmetrizer(&principal(&matrix, &unfrozen)) else {
        return Ok(Classification::Special { word: vec![], reason: SpecialReason::NotSkewSymmetrizable });
    };
    let mut full = vec![0i64; fq.num_groups()];
    for (p, &g) in unfrozen.iter().enumerate() {
        full[g] = sym[p];
    }
    let space = ClassifySpace { groups: fq.num_groups() };
    let (ex, failure) = explore(&space, fq.clone(), Limits::states(cap.max(1)));
    if let Some(f) = failure {
        let word = f.word(&ex);
        return match f.error {
            Stop::Special(reason) => Ok(Classification::Special { word, reason }),
            Stop::Folding(FoldingError::IntraGroupArrow { group, i, j }) => {
                Err(FoldingError::FoldingBroken { word, group, i, j })
            }
            Stop::Folding(e) => Err(e),
        };
    }
    if ex.cap_hit {
        return Ok(Classification::Unknown { explored: ex.states.len() });
    }
    Ok(Classification::Standard { matrix, symmetrizer: full, class_size: ex.states.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Quiver;

    #[test]
    fn matrix_mutation_matches_quiver_mutation() {
        let q = Quiver::from_arrows(4, &[(0, 1, 1), (1, 2, 2), (2, 0, 1), (2, 3, 1)]).unwrap();
        for k in 0..4 {
            assert_eq!(mutate_matrix(&q.rows(), k), q.mutate(k).unwrap().rows());
        }
    }

    #[test]
    fn symmetrizers() {
        assert_eq!(symmetrizer(&[vec![0, 2], vec![-1, 0]]), Some(vec![1, 2]));
        assert_eq!(symmetrizer(&[vec![0, 1], vec![-3, 0]]), Some(vec![3, 1]));
        assert_eq!(symmetrizer(&[vec![0, 1], vec![1, 0]]), None);
        assert_eq!(symmetrizer(&[vec![0, 1], vec![0, 0]]), None);
        assert_eq!(symmetrizer(&[vec![0, 0], vec![0, 0]]), Some(vec![1, 1]));
        // 3-cycle with inconsistent ratios
        let bad = vec![vec![0, 2, -1], vec![-1, 0, 1], vec![1, -1, 0]];
        assert_eq!(symmetrizer(&bad), None);
    }

    #[test]
    fn a3_fold_gives_b2() {
        // 1 -> 2 <- 3, outer nodes grouped
        let q = Quiver::from_arrows(3, &[(0, 1, 1), (2, 1, 1)]).unwrap();
        let fq = FoldedQuiver::new(q, vec![vec![0, 2], vec![1]]).unwrap();
        match classify_folding(&fq, 100).unwrap() {
            Classification::Standard { matrix, symmetrizer, .. } => {
                assert_eq!(matrix, vec![vec![0, 2], vec![-1, 0]]);
                assert_eq!(symmetrizer, vec![1, 2]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mixed_directions_are_special() {
        // 0 -> 1 -> 2 -> 3 -> 0 with {1,3} grouped: node 0 sees both directions
        let arrows: Vec<_> = (0..4).map(|i| (i, (i + 1) % 4, 1)).collect();
        let q = Quiver::from_arrows(4, &arrows).unwrap();
        let fq = FoldedQuiver::new(q, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(matches!(
            classify_folding(&fq, 100).unwrap(),
            Classification::Special { word, reason: SpecialReason::MixedDirections { .. } } if word.is_empty()
        ));
    }
}
