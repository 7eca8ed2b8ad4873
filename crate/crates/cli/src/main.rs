mod report;

use std::error::Error;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use quiverfold::clusters::{
    check_duality_local, check_folded_cluster_condition, check_relation_order, cluster_complex,
    cluster_variable_census, enumerate_exchange_graph, exchange_two_faces, to_dot, to_json, ClusterError,
};
use quiverfold::folding::{classify_folding, enumerate_folded_class_with, FoldingError, IsoConvention};
use quiverfold::qcore::{enumerate_class, QuiverError};
use quiverfold::surface::{
    compare_with_exchange_graph, enumerate_triangulations, verify_variable_identities, DiskArc, FlipGraph, Tag,
};
use quiverfold::{Catalog, ExchangeGraph, FoldedQuiver, FoldedSeed, Quiver, SeedMode};
use serde_json::{json, Value};

use report::{input_hash, write_atomic, RunReport, Timings};

type Res<T> = Result<T, Box<dyn Error>>;

const DEFAULT_CAP: usize = 1_000_000;

/// Folded quivers, group mutation and folded cluster algebras.
///
/// Every command prints a JSON run report on stdout. Exit status is 0 on
/// success, 2 when a cap stopped an enumeration and 1 on error. Node and
/// group numbers given on the command line are 1-based; indices inside JSON
/// results and input files are 0-based.
#[derive(Parser)]
#[command(name = "quiverfold", version)]
struct Cli {
    /// Worker threads (speed only, never output)
    #[arg(long, global = true, env = "QUIVERFOLD_JOBS")]
    jobs: Option<usize>,
    /// Leave timings out of the report
    #[arg(long, global = true)]
    no_timings: bool,
    /// Also write the report to this file
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Catalog name, e.g. Dhat3, Ehat6_22, Abar3
    name: Option<String>,
    /// Folding JSON file (`b` or `arrows`, `groups`, optional `frozen`)
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    /// One generator per node instead of one per group
    #[arg(long, conflicts_with = "gvectors")]
    unfolded_mode: bool,
    /// As --unfolded-mode, tracking variables by g-vector
    #[arg(long)]
    gvectors: bool,
}

impl ModeArgs {
    fn mode(self) -> SeedMode {
        if self.gvectors {
            SeedMode::GVectors
        } else if self.unfolded_mode {
            SeedMode::Unfolded
        } else {
            SeedMode::ClusterFolded
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    GroupPermuting,
    GroupFixing,
    Underlying,
}

impl From<Convention> for IsoConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::GroupPermuting => IsoConvention::GroupPermuting,
            Convention::GroupFixing => IsoConvention::GroupFixing,
            Convention::Underlying => IsoConvention::UnderlyingQuiver,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Named quivers and foldings
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Mutate a quiver read from a JSON file at node K
    Mutate {
        #[arg(short = 'q', long = "quiver")]
        quiver: PathBuf,
        #[arg(short = 'k')]
        k: usize,
    },
    /// Size of the mutation class of a quiver
    Class {
        #[arg(short = 'q', long = "quiver")]
        quiver: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Size of the folded mutation class
    FoldedClass {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value = "group-permuting")]
        convention: Convention,
    },
    /// Exchange graph of the folded cluster algebra
    Exchange {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Cluster variables, f-vector and polygons of the exchange complex
    Faces {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Standard (skew-symmetrizable) or special folding
    Classify {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Whether every group keeps a single cluster variable
    Condition {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Order of a word of group mutations acting on the base seed
    Relation {
        #[command(flatten)]
        src: Source,
        /// Comma-separated groups, 1-based
        #[arg(long, value_delimiter = ',', required = true)]
        word: Vec<usize>,
        #[arg(long, default_value_t = 12)]
        max: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Compare exchange graphs of two foldings near their base seeds
    Duality {
        a: String,
        b: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Tagged triangulations of the once-punctured n-gon
    Surface {
        #[command(subcommand)]
        action: SurfaceCmd,
    },
    /// Write the exchange graph as DOT or JSON
    Export {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_name = "PATH", required_unless_present = "json")]
        dot: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show { name: String },
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Number of triangulations, split by self-folded triangles
    Count {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Flip graph, optionally written as DOT or JSON
    Flipgraph {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Exact identities between disk and ordinary cluster variables
    Identities {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Flip graph against the exchange graph of Dhat<n>
    Compare {
        #[arg(short = 'n')]
        n: usize,
    },
}

struct Outcome {
    result: Value,
    exhausted: Option<bool>,
    outputs: Vec<PathBuf>,
}

impl Outcome {
    fn done(result: Value) -> Self {
        Outcome { result, exhausted: None, outputs: Vec::new() }
    }
}

fn load(src: &Source) -> Res<FoldedQuiver> {
    match (&src.name, &src.file) {
        (Some(name), _) => Ok(Catalog::get(name)?.folded),
        (None, Some(path)) => Ok(FoldedQuiver::parse_json(&fs::read_to_string(path)?)?),
        (None, None) => Err("a catalog name or --file is required".into()),
    }
}

fn input_files(cmd: &Cmd) -> Vec<PathBuf> {
    let src = match cmd {
        Cmd::Mutate { quiver, .. } | Cmd::Class { quiver, .. } => return vec![quiver.clone()],
        Cmd::FoldedClass { src, .. }
        | Cmd::Exchange { src, .. }
        | Cmd::Faces { src, .. }
        | Cmd::Classify { src, .. }
        | Cmd::Condition { src, .. }
        | Cmd::Relation { src, .. }
        | Cmd::Export { src, .. } => src,
        _ => return Vec::new(),
    };
    src.file.iter().cloned().collect()
}

fn one_based(k: usize, len: usize, what: &str) -> Res<usize> {
    if k == 0 || k > len {
        return Err(format!("{what} {k} out of range 1..={len}").into());
    }
    Ok(k - 1)
}

/// Exchange graph, or the partial graph when the cap was reached.
fn exchange_graph(fq: FoldedQuiver, mode: SeedMode, cap: usize) -> Res<ExchangeGraph> {
    match enumerate_exchange_graph(&FoldedSeed::initial(fq, mode), cap) {
        Ok(g) => Ok(g),
        Err(ClusterError::CapExceeded(g)) => Ok(*g),
        Err(e @ ClusterError::FoldedClusterViolation { .. }) => {
            Err(format!("{e}; rerun with --unfolded-mode or --gvectors").into())
        }
        Err(e) => Err(e.into()),
    }
}

fn graph_summary(g: &ExchangeGraph) -> Value {
    let depth = (0..g.len()).map(|v| g.depth(v)).max().unwrap_or(0);
    json!({
        "mode": g.mode(),
        "convention": g.convention(),
        "vertices": g.len(),
        "edges": g.num_edges(),
        "regular": g.is_regular(),
        "max_depth": depth,
    })
}

fn run(cmd: &Cmd) -> Res<Outcome> {
    match cmd {
        Cmd::Catalog { action: CatalogCmd::List } => {
            let names: Vec<Value> =
                Catalog::list().into_iter().map(|(n, d)| json!({ "name": n, "description": d })).collect();
            Ok(Outcome::done(Value::Array(names)))
        }
        Cmd::Catalog { action: CatalogCmd::Show { name } } => {
            let e = Catalog::get(name)?;
            Ok(Outcome::done(json!({
                "name": e.name,
                "description": e.description,
                "folding": e.folded.to_json(),
                "expected": e.expected,
            })))
        }
        Cmd::Mutate { quiver, k } => {
            let q = Quiver::parse_json(&fs::read_to_string(quiver)?)?;
            let k = one_based(*k, q.n(), "node")?;
            Ok(Outcome::done(json!({ "quiver": q.mutate(k)?.to_json() })))
        }
        Cmd::Class { quiver, cap } => {
            let q = Quiver::parse_json(&fs::read_to_string(quiver)?)?;
            let class = match enumerate_class(&q, *cap) {
                Ok(c) => c,
                Err(QuiverError::CapExceeded(c)) => *c,
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome {
                result: json!({ "class_size": class.len() }),
                exhausted: Some(class.exhausted),
                outputs: Vec::new(),
            })
        }
        Cmd::FoldedClass { src, cap, convention } => {
            let fq = load(src)?;
            let conv: IsoConvention = (*convention).into();
            let class = match enumerate_folded_class_with(&fq, *cap, conv) {
                Ok(c) => c,
                Err(FoldingError::CapExceeded(c)) => *c,
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome {
                result: json!({ "class_size": class.len(), "convention": conv }),
                exhausted: Some(class.exhausted),
                outputs: Vec::new(),
            })
        }
        Cmd::Exchange { src, cap, mode } => {
            let g = exchange_graph(load(src)?, mode.mode(), *cap)?;
            Ok(Outcome { result: graph_summary(&g), exhausted: Some(g.is_exhausted()), outputs: Vec::new() })
        }
        Cmd::Faces { src, cap, mode } => {
            let g = exchange_graph(load(src)?, mode.mode(), *cap)?;
            if !g.is_exhausted() {
                return Ok(Outcome { result: graph_summary(&g), exhausted: Some(false), outputs: Vec::new() });
            }
            let census = cluster_variable_census(&g)?;
            let complex = cluster_complex(&g)?;
            let euler: i64 =
                complex.f_vector.iter().enumerate().map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
            let two_faces = match exchange_two_faces(&g) {
                Ok(t) => serde_json::to_value(t)?,
                Err(ClusterError::NotEnoughGroups) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            Ok(Outcome {
                result: json!({
                    "mode": g.mode(),
                    "variables": census.variables(),
                    "clusters": census.clusters,
                    "edges": g.num_edges(),
                    "regular": census.regular,
                    "frozen": census.frozen.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "f_vector": complex.f_vector,
                    "euler_characteristic": euler,
                    "facets_full": complex.facets_full,
                    "dual_graph_matches": complex.dual_graph_matches,
                    "two_faces": two_faces,
                }),
                exhausted: Some(true),
                outputs: Vec::new(),
            })
        }
        Cmd::Classify { src, cap } => {
            let c = classify_folding(&load(src)?, *cap)?;
            Ok(Outcome::done(json!({ "classification": c })))
        }
        Cmd::Condition { src, depth, cap } => {
            let c = check_folded_cluster_condition(&load(src)?, *depth, *cap)?;
            Ok(Outcome::done(json!({ "condition": c })))
        }
        Cmd::Relation { src, word, max, mode } => {
            let fq = load(src)?;
            let k = fq.num_groups();
            let word = word.iter().map(|&g| one_based(g, k, "group")).collect::<Res<Vec<_>>>()?;
            let order = check_relation_order(&FoldedSeed::initial(fq, mode.mode()), &word, *max)?;
            Ok(Outcome::done(json!({ "word": word, "order": order })))
        }
        Cmd::Duality { a, b, radius } => {
            let fa = FoldedSeed::initial(Catalog::get(a)?.folded, SeedMode::ClusterFolded);
            let fb = FoldedSeed::initial(Catalog::get(b)?.folded, SeedMode::ClusterFolded);
            Ok(Outcome::done(json!({ "duality": check_duality_local(&fa, &fb, *radius)? })))
        }
        Cmd::Surface { action } => surface(action),
        Cmd::Export { src, dot, json: json_path, cap, mode } => {
            let g = exchange_graph(load(src)?, mode.mode(), *cap)?;
            if !g.is_exhausted() {
                return Ok(Outcome { result: graph_summary(&g), exhausted: Some(false), outputs: Vec::new() });
            }
            let mut outputs = Vec::new();
            if let Some(p) = dot {
                write_atomic(p, to_dot(&g).as_bytes())?;
                outputs.push(p.clone());
            }
            if let Some(p) = json_path {
                let mut text = serde_json::to_string_pretty(&to_json(&g))?;
                text.push('\n');
                write_atomic(p, text.as_bytes())?;
                outputs.push(p.clone());
            }
            Ok(Outcome { result: graph_summary(&g), exhausted: Some(true), outputs })
        }
    }
}

fn flip_dot(g: &FlipGraph) -> String {
    let mut out = String::from("graph flips {\n  node [shape=box];\n");
    for (v, t) in g.triangulations.iter().enumerate() {
        let label: Vec<String> = t.arcs().iter().map(|a| a.to_string()).collect();
        let fill = match t.loop_point() {
            None => "white",
            Some(_) if t.arcs().iter().any(|a| matches!(a, DiskArc::Radius(_, Tag::Tagged))) => "lightblue",
            Some(_) => "lightyellow",
        };
        writeln!(out, "  {v} [label=\"{}\", style=filled, fillcolor={fill}];", label.join(" ")).unwrap();
    }
    for (u, row) in g.neighbors.iter().enumerate() {
        for (p, &v) in row.iter().enumerate() {
            if u < v {
                writeln!(out, "  {u} -- {v} [label=\"{}\"];", p + 1).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

fn surface(action: &SurfaceCmd) -> Res<Outcome> {
    match action {
        SurfaceCmd::Count { n } => {
            let g = enumerate_triangulations(*n)?;
            Ok(Outcome::done(json!({
                "n": n,
                "triangulations": g.len(),
                "partition": g.partition,
            })))
        }
        SurfaceCmd::Flipgraph { n, dot, json: json_path } => {
            let g = enumerate_triangulations(*n)?;
            let mut outputs = Vec::new();
            if let Some(p) = dot {
                write_atomic(p, flip_dot(&g).as_bytes())?;
                outputs.push(p.clone());
            }
            if let Some(p) = json_path {
                let edges: Vec<[usize; 3]> = g
                    .neighbors
                    .iter()
                    .enumerate()
                    .flat_map(|(u, row)| row.iter().enumerate().filter(move |&(_, &v)| u < v).map(move |(p, &v)| [u, v, p]))
                    .collect();
                let body = json!({ "n": n, "triangulations": g.triangulations, "edges": edges });
                let mut text = serde_json::to_string_pretty(&body)?;
                text.push('\n');
                write_atomic(p, text.as_bytes())?;
                outputs.push(p.clone());
            }
            let degrees: Vec<usize> = g.neighbors.iter().map(Vec::len).collect();
            Ok(Outcome {
                result: json!({
                    "n": n,
                    "triangulations": g.len(),
                    "edges": g.num_edges(),
                    "degree": degrees.iter().max(),
                    "regular": degrees.windows(2).all(|w| w[0] == w[1]),
                    "partition": g.partition,
                    "shape_key": g.shape_key().to_hex(),
                }),
                exhausted: None,
                outputs,
            })
        }
        SurfaceCmd::Identities { n } => Ok(Outcome::done(serde_json::to_value(verify_variable_identities(*n)?)?)),
        SurfaceCmd::Compare { n } => {
            let m = compare_with_exchange_graph(*n)?;
            Ok(Outcome::done(json!({ "isomorphic": m.isomorphic(), "match": m })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let command: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let outcome = input_hash(&command, &input_files(&cli.cmd))
        .map_err(Box::<dyn Error>::from)
        .and_then(|h| run(&cli.cmd).map(|o| (h, o)));
    let (hash, outcome) = match outcome {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let timings = (!cli.no_timings).then(|| Timings { elapsed_ms: start.elapsed().as_secs_f64() * 1000.0 });
    let outputs = outcome.outputs.iter().map(|p| p.display().to_string()).collect();
    let report = RunReport::new(command, hash, outcome.exhausted, outcome.result, outputs, timings);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    if let Some(p) = &cli.report {
        if let Err(e) = write_atomic(p, text.as_bytes()) {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    print!("{text}");
    if outcome.exhausted == Some(false) {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
