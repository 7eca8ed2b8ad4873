//! Acceptance suite: one PASS/FAIL line per criterion, details indented below.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! A criterion that does not reproduce its expected values prints FAIL; the
//! process only exits non-zero when a computation errors out.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use quiverfold::clusters::{
    check_folded_cluster_condition, check_relation_order, cluster_variable_census, enumerate_exchange_graph,
    exchange_two_faces, ClusterCondition, RelationOrder,
};
use quiverfold::folding::{
    classify_folding, enumerate_folded_class, enumerate_folded_class_with, validate_folding, Classification,
    FoldingStatus, IsoConvention,
};
use quiverfold::qcore::{is_mutation_equivalent, Equivalence};
use quiverfold::surface::{build_disk, compare_with_exchange_graph, enumerate_triangulations, verify_variable_identities};
use quiverfold::{Catalog, ExchangeGraph, FoldedQuiver, FoldedSeed, Quiver, SeedMode};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

struct Check {
    ok: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { ok: true, details: Vec::new() }
    }

    fn expect<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let good = got == want;
        self.ok &= good;
        let mark = if good { "ok" } else { "MISMATCH" };
        self.details.push(format!("{what}: got {got:?}, expected {want:?} [{mark}]"));
    }

    fn note(&mut self, line: String) {
        self.details.push(line);
    }
}

fn folded(name: &str) -> FoldedQuiver {
    Catalog::get(name).unwrap_or_else(|e| panic!("{name}: {e}")).folded
}

fn graph(name: &str, mode: SeedMode) -> ExchangeGraph {
    enumerate_exchange_graph(&FoldedSeed::initial(folded(name), mode), 1_000_000).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn table2() -> Check {
    let mut c = Check::new();
    let expected = [
        ("Ehat6_1", 42),
        ("Ehat6_11", 55),
        ("Ehat6_02", 124),
        ("Ehat6_12", 110),
        ("Ehat6_22", 23),
        ("Ehat7_1", 192),
        ("Ehat7_11", 254),
        ("Ehat7_12", 51),
        ("Ehat8_1", 1260),
        ("Ehat8_11", 1023),
        ("Y5", 7),
        ("Y7", 99),
    ];
    for (name, want) in expected {
        let fq = folded(name);
        let got = enumerate_folded_class_with(&fq, 1_000_000, IsoConvention::GroupPermuting).unwrap().len();
        c.expect(name, got, want);
        if got != want {
            let size = |conv| match enumerate_folded_class_with(&fq, 20_000, conv) {
                Ok(class) => class.len().to_string(),
                Err(e) => e.to_string(),
            };
            c.note(format!(
                "  {name} under other conventions: group-fixing {}, underlying quiver {}",
                size(IsoConvention::GroupFixing),
                size(IsoConvention::UnderlyingQuiver)
            ));
        }
    }
    c
}

fn census(name: &str, mode: SeedMode) -> (usize, usize) {
    let c = cluster_variable_census(&graph(name, mode)).unwrap();
    (c.variables(), c.clusters)
}

fn table1() -> Check {
    let mut c = Check::new();
    let rows = [
        ("Dhat3", (12, 20), SeedMode::ClusterFolded),
        ("Dhat4", (20, 70), SeedMode::ClusterFolded),
        ("Ehat6", (24, 88), SeedMode::ClusterFolded),
        ("Ehat7", (45, 432), SeedMode::ClusterFolded),
        ("Ehat8", (90, 2600), SeedMode::GVectors),
        ("Hhat3", (18, 32), SeedMode::Unfolded),
        ("Hhat4", (62, 234), SeedMode::GVectors),
    ];
    for (name, want, mode) in rows {
        let t = Instant::now();
        let got = census(name, mode);
        c.expect(&format!("{name} (variables, clusters) [{mode:?}, {:.1?}]", t.elapsed()), got, want);
    }
    for name in ["Dhat4", "Ehat6", "Ehat7", "Hhat3"] {
        let exact = if name == "Hhat3" { SeedMode::Unfolded } else { SeedMode::ClusterFolded };
        c.expect(&format!("{name} g-vector census agrees with {exact:?}"), census(name, SeedMode::GVectors), census(name, exact));
    }
    c
}

fn hhat3_complex() -> Check {
    let mut c = Check::new();
    let g = graph("Hhat3", SeedMode::Unfolded);
    c.expect("vertices", g.len(), 32);
    c.expect("edges", g.num_edges(), 48);
    let faces = exchange_two_faces(&g).unwrap();
    c.expect("2-faces", faces.total, 18);
    c.expect("2-face census", faces.histogram, BTreeMap::from([(4, 4), (5, 8), (6, 2), (7, 4)]));
    c
}

fn dhat_formulas() -> Check {
    let mut c = Check::new();
    for n in 3..=5 {
        let g = graph(&format!("Dhat{n}"), SeedMode::ClusterFolded);
        let census = cluster_variable_census(&g).unwrap();
        c.expect(&format!("Dhat{n} algebra (variables, clusters)"), (census.variables(), census.clusters), (n * (n + 1), binomial(2 * n, n)));
        let flips = enumerate_triangulations(n).unwrap();
        let arcs = build_disk(n).unwrap().arcs.len();
        c.expect(&format!("Dhat{n} surface (arcs, triangulations)"), (arcs, flips.len()), (n * (n + 1), binomial(2 * n, n)));
    }
    for n in 3..=4 {
        let m = compare_with_exchange_graph(n).unwrap();
        c.expect(&format!("n = {n} flip graph isomorphic to exchange graph"), m.isomorphic(), true);
    }
    c
}

fn surface_identities() -> Check {
    let mut c = Check::new();
    for n in 3..=4 {
        match verify_variable_identities(n) {
            Ok(r) => {
                c.expect(&format!("n = {n} identities hold"), true, true);
                c.note(format!("  shared arcs {}, tagged radii {}, loops {}", r.shared, r.tagged_radii, r.loops));
            }
            Err(e) => c.expect(&format!("n = {n} identities hold ({e})"), false, true),
        }
    }
    c
}

/// Order of the Coxeter group of a simply-laced diagram, by closing the
/// simple reflections `s_i(e_j) = e_j - a_ij e_i` under multiplication.
fn coxeter_order(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut cartan = vec![vec![0i64; n]; n];
    for i in 0..n {
        cartan[i][i] = 2;
    }
    for &(i, j) in edges {
        cartan[i][j] = -1;
        cartan[j][i] = -1;
    }
    let gens: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut m = vec![0i64; n * n];
            for j in 0..n {
                m[j * n + j] = 1;
                m[i * n + j] -= cartan[i][j];
            }
            m
        })
        .collect();
    let mul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0i64; n * n];
        for r in 0..n {
            for k in 0..n {
                let x = a[r * n + k];
                if x != 0 {
                    for col in 0..n {
                        out[r * n + col] += x * b[k * n + col];
                    }
                }
            }
        }
        out
    };
    let id: Vec<i64> = (0..n * n).map(|x| (x / n == x % n) as i64).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(w) = stack.pop() {
        for s in &gens {
            let v = mul(s, &w);
            if seen.insert(v.clone()) {
                stack.push(v);
            }
        }
    }
    seen.len()
}

fn permutohedra() -> Check {
    let mut c = Check::new();
    let a2 = graph("Abar2", SeedMode::ClusterFolded);
    let a2_faces = exchange_two_faces(&a2).unwrap();
    c.expect("Abar2 vertices", a2.len(), 6);
    c.expect("Abar2 is a single 6-cycle", (a2.is_regular(), a2.num_edges(), a2_faces.histogram), (true, 6, BTreeMap::from([(6, 1)])));
    let a3 = graph("Abar3", SeedMode::ClusterFolded);
    c.expect("Abar3 vertices", a3.len(), 24);
    c.expect("Abar3 3-regular", (a3.is_regular(), a3.num_edges()), (true, 36));
    c.expect("Abar3 2-faces", exchange_two_faces(&a3).unwrap().histogram, BTreeMap::from([(4, 6), (6, 8)]));
    c.expect("Abar3 vertices = |W(A3)|", a3.len(), coxeter_order(3, &[(0, 1), (1, 2)]));
    let d4 = graph("Dbar4", SeedMode::ClusterFolded);
    c.expect("Dbar4 vertices", d4.len(), 192);
    c.expect("Dbar4 vertices = |W(D4)|", d4.len(), coxeter_order(4, &[(0, 1), (1, 2), (1, 3)]));
    let base = FoldedSeed::initial(folded("Abar3"), SeedMode::ClusterFolded);
    for (i, j, want) in [(0, 1, 3), (1, 2, 3), (0, 2, 2)] {
        let got = check_relation_order(&base, &[i, j], 12).unwrap();
        c.expect(&format!("Abar3 order of mu{}mu{}", i + 1, j + 1), got, RelationOrder::Order(want));
    }
    c
}

fn classification() -> Check {
    let mut c = Check::new();
    let d3 = classify_folding(&folded("Dhat3"), 100_000).unwrap();
    c.expect("Dhat3 special", matches!(d3, Classification::Special { .. }), true);
    c.note(format!("  Dhat3: {d3:?}"));
    let a3 = classify_folding(&folded("A3_fold"), 100_000).unwrap();
    c.expect("A3 {1,3},{2} standard", matches!(a3, Classification::Standard { .. }), true);
    c.note(format!("  A3_fold: {a3:?}"));
    c
}

fn cluster_condition() -> Check {
    let mut c = Check::new();
    for name in ["Hhat3", "Hhat4", "H4_fold", "G2_affine_fold"] {
        let got = check_folded_cluster_condition(&folded(name), 64, 1_000_000).unwrap();
        c.expect(&format!("{name} fails"), matches!(got, ClusterCondition::Fails { .. }), true);
    }
    for name in ["Dhat3", "Dhat4", "Ehat6", "Abar2", "Abar3"] {
        let got = check_folded_cluster_condition(&folded(name), 64, 1_000_000).unwrap();
        c.expect(&format!("{name} holds, exhausted"), matches!(got, ClusterCondition::Holds { .. }), true);
    }
    c
}

fn random_quiver(rng: &mut StdRng, n: usize) -> Quiver {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.5) {
                let m = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                rows[i][j] = m;
                rows[j][i] = -m;
            }
        }
    }
    Quiver::from_matrix(&rows, &[]).unwrap()
}

fn isomorphic(a: &Quiver, b: &Quiver) -> bool {
    fn rec(a: &Quiver, b: &Quiver, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == a.n() {
            return true;
        }
        for v in 0..b.n() {
            if !used[v] && a.is_frozen(i) == b.is_frozen(v) && (0..i).all(|j| a.b(i, j) == b.b(v, map[j])) {
                map.push(v);
                used[v] = true;
                if rec(a, b, map, used) {
                    return true;
                }
                used[v] = false;
                map.pop();
            }
        }
        false
    }
    a.n() == b.n() && rec(a, b, &mut Vec::new(), &mut vec![false; b.n()])
}

fn properties() -> Check {
    let mut c = Check::new();
    let mut rng = StdRng::seed_from_u64(9);

    let mut involution = true;
    let mut oracle = true;
    for case in 0..1000 {
        let n = rng.gen_range(1..=8);
        let a = random_quiver(&mut rng, n);
        let k = rng.gen_range(0..n);
        involution &= a.mutate(k).unwrap().mutate(k).unwrap() == a;
        let b = if case % 2 == 0 {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(&mut rng);
            a.permuted(&p).unwrap()
        } else {
            random_quiver(&mut rng, n)
        };
        oracle &= (a.canonical() == b.canonical()) == isomorphic(&a, &b);
    }
    c.expect("mutation is an involution", involution, true);
    c.expect("canonical forms agree with backtracking (1000 quivers)", oracle, true);

    let mut order_free = true;
    let mut automorphic = true;
    let mut order_two = true;
    for name in ["Dhat3", "Dhat4", "Abar3", "Dbar4", "X7_fold", "Ehat6_22", "Hhat3"] {
        let fq = folded(name);
        let mut sigma: Vec<usize> = (0..fq.quiver().n()).collect();
        for g in fq.groups() {
            for (a, &v) in g.iter().enumerate() {
                sigma[v] = g[(a + 1) % g.len()];
            }
        }
        let acts = fq.quiver().is_automorphism(&sigma);
        let mut cur = fq.clone();
        for _ in 0..20 {
            let g = *fq.unfrozen_groups().choose(&mut rng).unwrap();
            let mut members = cur.groups()[g].clone();
            members.shuffle(&mut rng);
            let mut q = cur.quiver().clone();
            for &v in &members {
                q = q.mutate(v).unwrap();
            }
            let Ok(next) = cur.group_mutate(g) else { break };
            order_free &= next.quiver() == &q;
            if acts {
                automorphic &= next.quiver().is_automorphism(&sigma);
            }
            cur = next;
        }
        if acts && fq.groups().iter().all(|g| g.len() <= 2) {
            order_two &= !matches!(validate_folding(&fq, 6, 5000).status, FoldingStatus::Invalid { .. });
        }
    }
    c.expect("group mutation independent of node order", order_free, true);
    c.expect("group-cycling automorphism survives group mutation", automorphic, true);
    c.expect("order-two foldings never invalid", order_two, true);

    let mut laurent = true;
    for name in ["Dhat3", "Dhat4", "Ehat6", "Ehat7", "Abar2", "Abar3", "A3_fold", "Dbar4"] {
        let g = graph(name, SeedMode::ClusterFolded);
        laurent &= g.seeds().iter().all(|s| s.vars().iter().all(|x| x.is_laurent()));
    }
    c.expect("every cluster variable is a Laurent polynomial", laurent, true);

    for (name, mode, want) in [("Dhat3", SeedMode::ClusterFolded, (20, 30, 12)), ("Hhat3", SeedMode::Unfolded, (32, 48, 18))] {
        let g = graph(name, mode);
        let f = exchange_two_faces(&g).unwrap().total;
        let (v, e) = (g.len(), g.num_edges());
        c.expect(&format!("{name} V, E, F"), (v, e, f), want);
        c.expect(&format!("{name} V - E + F"), v as i64 - e as i64 + f as i64, 2);
    }
    c
}

fn cross_checks() -> Check {
    let mut c = Check::new();
    for n in 3..=4 {
        let class = enumerate_folded_class(&Catalog::family("Dhat", n).unwrap().folded, 100_000).unwrap();
        let rep = Catalog::family("Dhat_rep", n).unwrap().folded;
        c.expect(&format!("Dhat{n} class contains the representative"), class.contains(&rep), true);
    }
    let cycle = Catalog::family("Dcirc", 4).unwrap().folded.quiver().clone();
    let star = folded("D4").quiver().clone();
    c.expect("4-cycle ~ D4 star", is_mutation_equivalent(&cycle, &star, 10_000).unwrap(), Equivalence::Yes);
    c
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("folded mutation class sizes", table2),
        ("cluster variables and clusters of the finite types", table1),
        ("Hhat3 exchange complex", hhat3_complex),
        ("Dhat formulas, algebra and surface", dhat_formulas),
        ("tagged radius and loop identities", surface_identities),
        ("permutohedra", permutohedra),
        ("standard and special classification", classification),
        ("folded cluster condition", cluster_condition),
        ("property suite", properties),
        ("Dhat representative and 4-cycle cross-checks", cross_checks),
    ];
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut passed = 0;
    let mut ran = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        if filter.is_some_and(|k| k != i + 1) {
            continue;
        }
        let t = Instant::now();
        let check = f();
        ran += 1;
        passed += check.ok as usize;
        let verdict = if check.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {title} ({:.1?})", i + 1, t.elapsed());
        for d in &check.details {
            println!("    {d}");
        }
    }
    println!("acceptance: {passed}/{ran} criteria pass");
}
