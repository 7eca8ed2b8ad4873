//! c- and g-vectors with respect to the initial seed, for `GVectors` mode.
//!
//! Only mutable nodes take part: vectors live in `Z^m`, indexed by the
//! mutable nodes of the initial quiver in increasing order.

use std::sync::Arc;

use crate::qcore::Quiver;
use crate::symalg::{Monomial, Polynomial, RationalFunction};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(super) struct Tropical {
    /// Initial mutable nodes.
    mutable: Arc<Vec<usize>>,
    /// `b0[j][i]`: initial exchange matrix between mutable nodes, column `j`.
    b0: Arc<Vec<Vec<i64>>>,
    /// c-vector of every node (empty for frozen nodes).
    c: Vec<Vec<i64>>,
    /// g-vector of every node (empty for frozen nodes).
    g: Vec<Vec<i64>>,
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

impl Tropical {
    pub fn initial(q: &Quiver) -> Self {
        let mutable: Vec<usize> = (0..q.n()).filter(|&i| !q.is_frozen(i)).collect();
        let m = mutable.len();
        let b0 = mutable.iter().map(|&j| mutable.iter().map(|&i| q.b(i, j)).collect()).collect();
        let mut c = vec![Vec::new(); q.n()];
        for (a, &v) in mutable.iter().enumerate() {
            c[v] = (0..m).map(|b| (a == b) as i64).collect();
        }
        Tropical { mutable: Arc::new(mutable), b0: Arc::new(b0), g: c.clone(), c }
    }

    /// Mutation at `k` of a seed whose quiver before mutation is `q`.
    pub fn mutate(&self, q: &Quiver, k: usize) -> Self {
        let m = self.mutable.len();
        let ck = &self.c[k];
        let eps = if ck.iter().any(|&x| x > 0) { 1 } else { -1 };
        let mut gk: Vec<i64> = self.g[k].iter().map(|x| -x).collect();
        for &i in self.mutable.iter() {
            let w = pos(-eps * q.b(i, k));
            if w != 0 {
                for (t, x) in gk.iter_mut().enumerate() {
                    *x += w * self.g[i][t];
                }
            }
        }
        for (j, &cjk) in ck.iter().enumerate() {
            let w = pos(-eps * cjk);
            if w != 0 {
                for (t, x) in gk.iter_mut().enumerate() {
                    *x -= w * self.b0[j][t];
                }
            }
        }
        let mut c = self.c.clone();
        for &i in self.mutable.iter() {
            if i == k {
                continue;
            }
            let bki = q.b(k, i);
            for j in 0..m {
                let x = ck[j];
                c[i][j] += x.signum() * pos(x * bki);
            }
        }
        c[k] = ck.iter().map(|x| -x).collect();
        let mut g = self.g.clone();
        g[k] = gk;
        Tropical { mutable: self.mutable.clone(), b0: self.b0.clone(), c, g }
    }

    /// `x^g` for mutable nodes, the node's own generator for frozen ones.
    pub fn variable(&self, n: usize, node: usize) -> RationalFunction {
        if self.g[node].is_empty() {
            return RationalFunction::var(n, node);
        }
        let mut up = vec![0u32; n];
        let mut down = vec![0u32; n];
        for (t, &x) in self.g[node].iter().enumerate() {
            let v = self.mutable[t];
            if x > 0 {
                up[v] = x as u32;
            } else {
                down[v] = (-x) as u32;
            }
        }
        RationalFunction::new(Polynomial::monomial(Monomial::new(up), 1), Polynomial::monomial(Monomial::new(down), 1))
            .expect("monomial denominator is non-zero")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_g_vectors() {
        let q = Quiver::from_matrix(&[vec![0, 1], vec![-1, 0]], &[]).unwrap();
        let t = Tropical::initial(&q).mutate(&q, 0);
        assert_eq!(t.g[0], vec![-1, 1]);
        assert_eq!(t.c[0], vec![-1, 0]);
        assert_eq!(t.c[1], vec![1, 1]);
        let q1 = q.mutate(0).unwrap();
        let t = t.mutate(&q1, 1);
        assert_eq!(t.g[1], vec![-1, 0]);
    }
}
