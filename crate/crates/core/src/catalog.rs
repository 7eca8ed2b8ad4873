//! Named quivers and foldings.
//!
//! Fixed entries are read from `data/catalog.json` (1-based node labels).
//! Parametrised families are built in code and addressed by a prefix plus the
//! parameter, e.g. `Dhat3`, `Abar2`, `Dcirc6`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::folding::{FoldedQuiver, FoldingError};
use crate::qcore::Quiver;

const DATA: &str = include_str!("../data/catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
    #[error("parameter {param} out of range for {family}")]
    BadParam { family: String, param: usize },
    #[error("catalog data is malformed: {0}")]
    Data(String),
    #[error(transparent)]
    Folding(#[from] FoldingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterConditionExpectation {
    Holds,
    Fails,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folded_class_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_condition: Option<ClusterConditionExpectation>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub folded: FoldedQuiver,
    pub expected: Expected,
}

#[derive(Clone, Debug, Deserialize)]
struct RawEntry {
    name: String,
    description: String,
    nodes: usize,
    arrows: Vec<[i64; 3]>,
    groups: Vec<Vec<usize>>,
    #[serde(default)]
    frozen_groups: Vec<usize>,
    #[serde(default)]
    expected: Expected,
}

#[derive(Deserialize)]
struct RawCatalog {
    version: u32,
    entries: Vec<RawEntry>,
}

fn raw() -> &'static [RawEntry] {
    static CELL: OnceLock<Vec<RawEntry>> = OnceLock::new();
    CELL.get_or_init(|| {
        let cat: RawCatalog = serde_json::from_str(DATA).expect("bundled catalog parses");
        assert_eq!(cat.version, 1);
        cat.entries
    })
}

fn build(raw: &RawEntry) -> Result<CatalogEntry, CatalogError> {
    let mut arrows = Vec::with_capacity(raw.arrows.len());
    for &[i, j, m] in &raw.arrows {
        if i < 1 || j < 1 {
            return Err(CatalogError::Data(format!("{}: labels are 1-based", raw.name)));
        }
        arrows.push((i as usize - 1, j as usize - 1, m));
    }
    let q = Quiver::from_arrows(raw.nodes, &arrows).map_err(FoldingError::from)?;
    let groups = raw.groups.iter().map(|g| g.iter().map(|&v| v - 1).collect()).collect();
    let frozen: Vec<usize> = raw.frozen_groups.iter().map(|&g| g - 1).collect();
    let folded = FoldedQuiver::with_frozen_groups(q, groups, &frozen)?;
    Ok(CatalogEntry {
        name: raw.name.clone(),
        description: raw.description.clone(),
        folded,
        expected: raw.expected.clone(),
    })
}

/// A parametrised family: name prefix, parameter range, description.
struct Family {
    prefix: &'static str,
    min: usize,
    max: usize,
    description: &'static str,
}

const FAMILIES: &[Family] = &[
    Family { prefix: "Dcirc", min: 3, max: 64, description: "oriented n-cycle, unfolded" },
    Family { prefix: "Dhat", min: 2, max: 32, description: "oriented 2n-cycle with node i grouped with i+n" },
    Family { prefix: "Dhat_rep", min: 3, max: 32, description: "representative of the Dhat class: one unfolded 2-cycle followed by a path" },
    Family { prefix: "Abar", min: 1, max: 16, description: "type A Dynkin diagram with every edge replaced by a two-cycle edge" },
    Family { prefix: "Dbar", min: 4, max: 16, description: "type D Dynkin diagram with every edge replaced by a two-cycle edge" },
    Family { prefix: "Ebar", min: 6, max: 8, description: "type E Dynkin diagram with every edge replaced by a two-cycle edge" },
];

const EXTRA: &[(&str, &str)] = &[
    ("D4", "D4 star, centre node 1"),
    ("A3", "linear A3, 1 -> 2 <- 3"),
    ("A3_fold", "A3 with the two outer nodes grouped"),
    ("A3_fold_dual", "A3_fold with the groups listed in the opposite order"),
    ("Abar2_unfolded", "Abar2 quiver with singleton groups"),
];

pub struct Catalog;

impl Catalog {
    /// Every fixed name followed by the family templates (`Dhat<n>` etc.).
    pub fn list() -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> =
            raw().iter().map(|e| (e.name.clone(), e.description.clone())).collect();
        out.extend(EXTRA.iter().map(|(n, d)| (n.to_string(), d.to_string())));
        out.extend(FAMILIES.iter().map(|f| (format!("{}<n>", f.prefix), f.description.to_string())));
        out
    }

    pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
        if let Some(r) = raw().iter().find(|e| e.name == name) {
            return build(r);
        }
        if let Some(e) = extra(name) {
            return e;
        }
        // longest prefix first so Dhat_rep wins over Dhat
        let mut fams: Vec<&Family> = FAMILIES.iter().collect();
        fams.sort_by_key(|f| std::cmp::Reverse(f.prefix.len()));
        for f in fams {
            if let Some(rest) = name.strip_prefix(f.prefix) {
                if let Ok(n) = rest.parse::<usize>() {
                    return Catalog::family(f.prefix, n);
                }
            }
        }
        Err(CatalogError::UnknownName(name.to_string()))
    }

    pub fn family(prefix: &str, n: usize) -> Result<CatalogEntry, CatalogError> {
        let fam = FAMILIES
            .iter()
            .find(|f| f.prefix == prefix)
            .ok_or_else(|| CatalogError::UnknownName(prefix.to_string()))?;
        if n < fam.min || n > fam.max {
            return Err(CatalogError::BadParam { family: prefix.to_string(), param: n });
        }
        let (folded, expected) = match prefix {
            "Dcirc" => (FoldedQuiver::unfolded(cycle(n)), Expected::default()),
            "Dhat" => {
                let groups = (0..n).map(|i| vec![i, i + n]).collect();
                let expected = Expected {
                    folded_class_size: None,
                    variables: Some(n * (n + 1)),
                    clusters: Some(binomial(2 * n, n)),
                    cluster_condition: Some(ClusterConditionExpectation::Holds),
                };
                (FoldedQuiver::new(cycle(2 * n), groups)?, expected)
            }
            "Dhat_rep" => (dhat_rep(n)?, Expected::default()),
            "Abar" => bar(n, &dynkin_a(n), factorial(n + 1))?,
            "Dbar" => bar(n, &dynkin_d(n), factorial(n) << (n - 1))?,
            "Ebar" => {
                let order = match n {
                    6 => 51_840,
                    7 => 2_903_040,
                    _ => 696_729_600,
                };
                bar(n, &dynkin_e(n), order)?
            }
            _ => unreachable!(),
        };
        Ok(CatalogEntry { name: format!("{prefix}{n}"), description: fam.description.to_string(), folded, expected })
    }
}

fn extra(name: &str) -> Option<Result<CatalogEntry, CatalogError>> {
    let (_, description) = EXTRA.iter().find(|(n, _)| *n == name)?;
    let a3 = || Quiver::from_arrows(3, &[(0, 1, 1), (2, 1, 1)]).expect("valid arrows");
    let folded = match name {
        "D4" => Ok(FoldedQuiver::unfolded(
            Quiver::from_arrows(4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]).expect("valid arrows"),
        )),
        "A3" => Ok(FoldedQuiver::unfolded(a3())),
        "A3_fold" => FoldedQuiver::new(a3(), vec![vec![0, 2], vec![1]]),
        "A3_fold_dual" => FoldedQuiver::new(a3(), vec![vec![1], vec![0, 2]]),
        "Abar2_unfolded" => bar(2, &dynkin_a(2), 6).map(|(fq, _)| FoldedQuiver::unfolded(fq.quiver().clone())),
        _ => unreachable!(),
    };
    Some(folded.map_err(CatalogError::from).map(|folded| CatalogEntry {
        name: name.to_string(),
        description: description.to_string(),
        folded,
        expected: Expected::default(),
    }))
}

fn cycle(n: usize) -> Quiver {
    let arrows: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1)).collect();
    Quiver::from_arrows(n, &arrows).expect("cycle is a valid quiver")
}

fn dhat_rep(n: usize) -> Result<FoldedQuiver, FoldingError> {
    // top row 0..n, bottom row n..2n; the first two groups carry an unfolded 2-cycle
    let mut arrows = vec![(0, 1, 1), (1, n, 1), (n, n + 1, 1), (n + 1, 0, 1)];
    for i in 1..n - 1 {
        let (a, b) = if i % 2 == 1 { (i, i + 1) } else { (i + 1, i) };
        arrows.push((a, b, 1));
        arrows.push((a + n, b + n, 1));
    }
    let q = Quiver::from_arrows(2 * n, &arrows)?;
    FoldedQuiver::new(q, (0..n).map(|i| vec![i, i + n]).collect())
}

fn dynkin_a(n: usize) -> Vec<(usize, usize)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

fn dynkin_d(n: usize) -> Vec<(usize, usize)> {
    let mut e = dynkin_a(n - 1);
    e.push((n - 3, n - 1));
    e
}

fn dynkin_e(n: usize) -> Vec<(usize, usize)> {
    let mut e = dynkin_a(n - 1);
    e.push((2, n - 1));
    e
}

/// Each edge `i - j` (i < j) becomes the oriented 4-cycle `i -> j -> i' -> j' -> i`.
fn bar(n: usize, edges: &[(usize, usize)], weyl_order: usize) -> Result<(FoldedQuiver, Expected), FoldingError> {
    let mut arrows = Vec::new();
    for &(i, j) in edges {
        arrows.extend([(i, j, 1), (j, i + n, 1), (i + n, j + n, 1), (j + n, i, 1)]);
    }
    let q = Quiver::from_arrows(2 * n, &arrows)?;
    let fq = FoldedQuiver::new(q, (0..n).map(|i| vec![i, i + n]).collect())?;
    let expected = Expected {
        clusters: Some(weyl_order),
        cluster_condition: Some(ClusterConditionExpectation::Holds),
        ..Expected::default()
    };
    Ok((fq, expected))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}
