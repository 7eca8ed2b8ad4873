//! Quiver of a triangulation via its lift to the double cover branched at
//! the puncture: a once-punctured `2n`-gon in which every lifted triangulation
//! is an ordinary one with all radii carrying the same tag.

use super::{DiskArc, DiskTriangulation};
use crate::folding::FoldedQuiver;
use crate::qcore::Quiver;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lifted {
    Chord(usize, usize),
    Radius(usize),
}

fn lifts(n: usize, a: DiskArc) -> [Lifted; 2] {
    let big = 2 * n;
    match a {
        DiskArc::Chord(i, j) => {
            let len = (j + n - i) % n;
            [Lifted::Chord(i, (i + len) % big), Lifted::Chord(i + n, (i + n + len) % big)]
        }
        DiskArc::Radius(m, _) => [Lifted::Radius(m), Lifted::Radius(m + n)],
        DiskArc::Loop(m) => [Lifted::Chord(m, m + n), Lifted::Chord(m + n, m)],
    }
}

/// Folded quiver on the lifted arcs: node `p` and node `p + n` are the two
/// lifts of the arc in position `p`, which forms group `p`. The arc of each
/// group is returned alongside.
pub fn triangulation_quiver(t: &DiskTriangulation) -> (FoldedQuiver, Vec<DiskArc>) {
    let n = t.n;
    let big = 2 * n;
    let mut nodes: Vec<Lifted> = vec![Lifted::Radius(0); big];
    for (p, &a) in t.arcs.iter().enumerate() {
        let [x, y] = lifts(n, a);
        nodes[p] = x;
        nodes[p + n] = y;
    }
    let find = |l: Lifted| nodes.iter().position(|&x| x == l);
    let mut radii: Vec<usize> =
        nodes.iter().filter_map(|l| if let Lifted::Radius(m) = l { Some(*m) } else { None }).collect();
    radii.sort_unstable();

    let mut b = vec![vec![0i64; big]; big];
    // cut along the radii; each sector is a polygon P, a, a+1, ..., next radius
    for (idx, &a) in radii.iter().enumerate() {
        let next = radii[(idx + 1) % radii.len()];
        let len = (next + big - a) % big;
        let len = if len == 0 { big } else { len };
        let verts = len + 2;
        // side between polygon vertices x < y, as a node (None for boundary or absent)
        let side = |x: usize, y: usize| -> Option<Option<usize>> {
            if x == 0 {
                return match y {
                    1 => Some(find(Lifted::Radius(a))),
                    _ if y == verts - 1 => Some(find(Lifted::Radius(next))),
                    _ => None,
                };
            }
            if y == x + 1 {
                return Some(None);
            }
            let (i, j) = ((a + x - 1) % big, (a + y - 1) % big);
            find(Lifted::Chord(i, j)).map(Some)
        };
        for x in 0..verts {
            for y in (x + 1)..verts {
                let Some(s1) = side(x, y) else { continue };
                for z in (y + 1)..verts {
                    let (Some(s2), Some(s3)) = (side(y, z), side(x, z)) else { continue };
                    // (x,y) -> (x,z) -> (y,z) -> (x,y)
                    for (u, v) in [(s1, s3), (s3, s2), (s2, s1)] {
                        if let (Some(u), Some(v)) = (u, v) {
                            b[u][v] += 1;
                            b[v][u] -= 1;
                        }
                    }
                }
            }
        }
    }
    let q = Quiver::from_matrix(&b, &[]).expect("triangle contributions are skew-symmetric");
    let groups = (0..n).map(|p| vec![p, p + n]).collect();
    let fq = FoldedQuiver::new(q, groups).expect("lifted arcs pair up");
    (fq, t.arcs.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::folding::IsoConvention;
    use crate::surface::fan;

    #[test]
    fn fan_lifts_to_the_base_cycle() {
        for n in 3..6 {
            let (fq, arcs) = triangulation_quiver(&fan(n));
            assert_eq!(arcs.len(), n);
            let base = Catalog::family("Dhat", n).unwrap().folded;
            assert_eq!(fq.quiver(), base.quiver());
            assert_eq!(fq.canonical_key_with(IsoConvention::GroupFixing), base.canonical_key_with(IsoConvention::GroupFixing));
        }
    }
}
