//! `pst`: build, certify, and probe Hadamard-diagonalizable graphs from the command line.
//!
//! Graphs travel between subcommands as JSON on stdin/stdout. Vertices are 1-based.

mod io;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use pst_core::analysis::{eigencount_solve, ring_sum_matrix, timing_drop, verify_sparsity_corpus, OrderConstraint};
use pst_core::cubelike::{
    code_weight_gcd, decompose_standard, enumerate, enumerate_parallel, pst_by_sigma, regular_pst_family, ConnectionSet,
    Filter,
};
use pst_core::families::{order12_merge, regular_family, weighted_hypercube, Construction};
use pst_core::graphs::{add, cartesian_product, complement, join, merge, scale, MergeWeights};
use pst_core::hadamard::{catalog, is_hadamard, normalize, sylvester};
use pst_core::matrix::parse_rational;
use pst_core::pst::{
    common_hadamard, pgst_approximants_within, pgst_sequence, pst_mod4, pst_pairs, MergeWeight, ParityClass, PstReport,
    QuadraticIrrational, Verdict,
};
use pst_core::spectral::{fidelity_csv, fidelity_curve, Dynamics, Propagator, PST_TOLERANCE};
use pst_core::{Error, HadamardMatrix, PiMultiple, QMatrix, WeightedGraph};

use crate::io::{
    hadamard_from_spec, load_certificate, load_graph, read_input, read_pair, vertex, write_output, CliResult, Failure,
};

#[derive(Parser)]
#[command(name = "pst", version, about = "Perfect state transfer on Hadamard-diagonalizable graphs")]
struct Cli {
    /// Write the main output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for data-parallel enumeration.
    #[arg(long, global = true)]
    parallel: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, check, or normalize Hadamard matrices.
    #[command(subcommand)]
    Hadamard(HadamardCmd),
    /// Build and combine graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Certify a graph against a Hadamard matrix and print the certificate.
    Certify(CertifyArgs),
    /// Decide perfect state transfer at π/2.
    #[command(subcommand)]
    Pst(PstCmd),
    /// Cubelike graphs over Z₂^d.
    #[command(subcommand)]
    Cubelike(CubelikeCmd),
    /// Named constructions with PST.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Rational approximants driving pretty good state transfer.
    #[command(subcommand)]
    Pgst(PgstCmd),
    /// Timing sensitivity and sparsity checks.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Fidelity over time.
    #[command(subcommand)]
    Fidelity(FidelityCmd),
}

#[derive(Subcommand)]
enum HadamardCmd {
    /// Print a catalog or Sylvester matrix.
    Gen {
        #[arg(long, conflicts_with = "sylvester")]
        order: Option<usize>,
        #[arg(long)]
        sylvester: Option<u32>,
    },
    /// Exit 0 if the input is a Hadamard matrix, 1 otherwise.
    Check {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Sign rows and columns so the first row and column are all ones.
    Normalize {
        #[arg(default_value = "-")]
        input: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Empty,
    Complete,
    Path,
    Cycle,
    Matching,
    Hypercube,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// A standard graph, or one from an edge list like `1-2,2-3:1/2`.
    Build {
        #[arg(long, required_unless_present = "edges")]
        kind: Option<Kind>,
        /// Vertex count (dimension for `hypercube`).
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "kind")]
        edges: Option<String>,
    },
    Complement {
        #[arg(default_value = "-")]
        input: String,
    },
    Join {
        first: String,
        second: String,
    },
    /// Cartesian product; vertex (a, b) gets index a·n₂ + b.
    Product {
        first: String,
        second: String,
    },
    /// Weighted merge with adjacency [[w₁A₁, w₂A₂], [w₂A₂, w₁A₁]].
    Merge {
        first: String,
        second: String,
        #[arg(long, default_value = "1")]
        w1: String,
        #[arg(long, default_value = "1")]
        w2: String,
    },
    /// Sum of two Laplacians on the same vertex set.
    Add {
        first: String,
        second: String,
    },
    Scale {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        by: String,
    },
    /// Random unweighted graph with edge probability `p`.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the Laplacian matrix.
    Laplacian {
        #[arg(default_value = "-")]
        input: String,
    },
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(default_value = "-")]
    input: String,
    /// `catalog:N`, `sylvester:K`, or a file of ±1 rows; defaults to the catalog entry.
    #[arg(long)]
    hadamard: Option<String>,
}

#[derive(Subcommand)]
enum PstCmd {
    /// Decide PST between two vertices; exit 1 when there is none.
    Check {
        #[arg(long, default_value = "-")]
        graph: String,
        #[arg(long, num_args = 2, value_names = ["J", "K"])]
        pair: Vec<usize>,
        #[arg(long)]
        hadamard: Option<String>,
    },
    /// Every PST pair at π/2; exit 1 when there is none.
    Pairs {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long)]
        hadamard: Option<String>,
    },
}

#[derive(Args)]
struct SetArgs {
    /// Comma-separated bitstrings or unit vectors, e.g. `e1,e2,e1+e3` or `001,110`.
    #[arg(long, conflicts_with = "file")]
    set: Option<String>,
    /// Connection-set file: `d=<int>` then one bitstring per line.
    #[arg(long)]
    file: Option<String>,
    /// Dimension, when it should not be inferred from `--set`.
    #[arg(long)]
    dim: Option<u32>,
}

impl SetArgs {
    fn load(&self) -> CliResult<ConnectionSet> {
        match (&self.set, &self.file) {
            (Some(s), _) => Ok(ConnectionSet::parse_items(s, self.dim)?),
            (None, Some(f)) => Ok(ConnectionSet::from_text(&read_input(f)?)?),
            (None, None) => match self.dim {
                Some(d) => Ok(ConnectionSet::new(d, [])?),
                None => Err(Failure::Usage("give --set, --file, or --dim for the empty set".into())),
            },
        }
    }
}

#[derive(Subcommand)]
enum CubelikeCmd {
    Build(SetArgs),
    /// XOR of the connection set and the resulting verdict.
    Sigma(SetArgs),
    /// Connection sets passing the given filters, one per line.
    Enum {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        connected: Option<bool>,
        #[arg(long)]
        bipartite: Option<bool>,
        #[arg(long)]
        sigma_nonzero: Option<bool>,
        /// Print only the number of sets.
        #[arg(long)]
        count: bool,
    },
    /// Recover the connection set of a graph or 0/1 matrix in binary vertex order.
    Decompose {
        #[arg(default_value = "-")]
        input: String,
        /// Read a whitespace-separated 0/1 matrix instead of graph JSON.
        #[arg(long)]
        matrix: bool,
    },
    /// Connected non-bipartite `deg`-regular cubelike graph with PST on 2^k vertices.
    Family {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        deg: usize,
        /// Print the connection set instead of the graph.
        #[arg(long)]
        set: bool,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Regular graph on 2^k vertices of the given degree with PST.
    Regular {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        deg: usize,
        /// Print the recipe and report instead of the graph.
        #[arg(long)]
        report: bool,
    },
    /// Weighted hypercube (w₁K₂)□⋯□(w_nK₂).
    Hypercube {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<BigInt>,
        #[arg(long)]
        report: bool,
    },
    /// Order-12 graph with weights in thirds merged with K₁₂ at (5, 2).
    Order12 {
        #[arg(long)]
        report: bool,
    },
}

#[derive(Subcommand)]
enum PgstCmd {
    /// Approximants u/v of a quadratic irrational with |x − u/v| < 1/v² in a parity class.
    Approx {
        #[arg(long)]
        weight: String,
        /// `o,e`, `e,o`, or `o,o`.
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max_scan: usize,
    },
    /// Fidelities along the approximants for one target pair of the merge.
    Sequence {
        first: String,
        second: String,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        pair: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[arg(long)]
        hadamard: Option<String>,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Fidelity drop when reading out at t₀ + h.
    Timing {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, num_args = 2, value_names = ["J", "K"])]
        pair: Vec<usize>,
        #[arg(long, default_value = "1/2pi")]
        time: String,
        #[arg(long, allow_hyphen_values = true)]
        h: f64,
        #[arg(long)]
        hadamard: Option<String>,
    },
    /// Exhaustive sparsity check over cubelike graphs; exit 1 on a violation.
    Sparsity {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 4)]
        max_k: u32,
    },
    /// Solved eigenvalue counts for an r-regular graph with PST at π/2.
    Eigencount {
        #[arg(long)]
        r: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DynamicsArg {
    Laplacian,
    Adjacency,
}

#[derive(Subcommand)]
enum FidelityCmd {
    /// CSV of p(t) on an even grid over [0, t_max].
    Curve {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, num_args = 2, value_names = ["J", "K"])]
        pair: Vec<usize>,
        #[arg(long, default_value = "pi")]
        t_max: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, value_enum, default_value = "laplacian")]
        dynamics: DynamicsArg,
    },
}

/// Text to emit and the exit code that goes with it.
struct Outcome {
    text: String,
    code: u8,
    /// Output was already written while the command ran.
    streamed: bool,
}

impl Outcome {
    fn ok(text: impl Into<String>) -> Self {
        Outcome { text: text.into(), code: 0, streamed: false }
    }

    fn report(report: &PstReport) -> Self {
        Outcome { text: report.to_json(), code: if report.verdict == Verdict::None { 1 } else { 0 }, streamed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("pst: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) if out.streamed => ExitCode::from(out.code),
        Ok(out) => {
            let mut text = out.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &cli.out {
                Some(path) => write_output(path, &text),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
                        // a closed downstream pipe is not an error of ours
                        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(format!("stdout: {e}"))),
                        _ => Ok(()),
                    }
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.code),
                Err(e) => {
                    eprintln!("pst: {e}");
                    ExitCode::from(e.exit_code())
                }
            }
        }
        Err(e) => {
            eprintln!("pst: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Writes one item per line as it is produced; a closed pipe ends the stream quietly.
fn stream_lines<T: std::fmt::Display>(out: Option<&Path>, items: impl Iterator<Item = T>) -> CliResult<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(
            std::fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut sink = std::io::BufWriter::new(sink);
    let result = items.map(|x| writeln!(sink, "{x}")).collect::<std::io::Result<()>>().and_then(|()| sink.flush());
    match result {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Io(e.to_string())),
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Hadamard(c) => hadamard_cmd(c),
        Command::Graph(c) => graph_cmd(c),
        Command::Certify(a) => {
            let cert = load_certificate(&read_input(&a.input)?, a.hadamard.as_deref())?;
            Ok(Outcome::ok(cert.to_json()))
        }
        Command::Pst(c) => pst_cmd(c),
        Command::Cubelike(c) => cubelike_cmd(c, cli.parallel.is_some(), cli.out.as_deref()),
        Command::Family(c) => family_cmd(c),
        Command::Pgst(c) => pgst_cmd(c),
        Command::Analyze(c) => analyze_cmd(c, cli.parallel.is_some()),
        Command::Fidelity(c) => fidelity_cmd(c),
    }
}

fn hadamard_cmd(c: &HadamardCmd) -> CliResult<Outcome> {
    match c {
        HadamardCmd::Gen { order, sylvester: k } => {
            let h = match (order, k) {
                (Some(n), _) => catalog(*n)?,
                (None, Some(k)) => sylvester(*k)?,
                (None, None) => return Err(Failure::Usage("give --order or --sylvester".into())),
            };
            Ok(Outcome::ok(h.to_string()))
        }
        HadamardCmd::Check { input } => {
            let text = read_input(input)?;
            let rows = parse_sign_rows(&text)?;
            if is_hadamard(&rows) {
                Ok(Outcome::ok(format!("hadamard order {}", rows.len())))
            } else {
                Ok(Outcome { text: "not hadamard".into(), code: 1, streamed: false })
            }
        }
        HadamardCmd::Normalize { input } => {
            let h: HadamardMatrix = read_input(input)?.parse()?;
            Ok(Outcome::ok(normalize(&h).matrix.to_string()))
        }
    }
}

/// ±1 rows without the Hadamard check, so `check` can report a negative verdict.
fn parse_sign_rows(text: &str) -> CliResult<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let row = line
            .split_whitespace()
            .map(|t| match t {
                "+" | "1" | "+1" => Ok(1),
                "-" | "-1" => Ok(-1),
                other => Err(Failure::Core(Error::Parse(format!("bad entry {other:?}")))),
            })
            .collect::<CliResult<Vec<i64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn graph_cmd(c: &GraphCmd) -> CliResult<Outcome> {
    let g = match c {
        GraphCmd::Build { kind, n, edges } => match (kind, edges) {
            (_, Some(spec)) => parse_edges(*n, spec)?,
            (Some(Kind::Empty), None) => WeightedGraph::empty(*n),
            (Some(Kind::Complete), None) => WeightedGraph::complete(*n),
            (Some(Kind::Path), None) => WeightedGraph::path(*n),
            (Some(Kind::Cycle), None) => WeightedGraph::cycle(*n)?,
            (Some(Kind::Matching), None) => WeightedGraph::perfect_matching(*n)?,
            (Some(Kind::Hypercube), None) => ConnectionSet::basis(*n as u32)?.build()?,
            (None, None) => return Err(Failure::Usage("give --kind or --edges".into())),
        },
        GraphCmd::Complement { input } => complement(&load_graph(&read_input(input)?)?)?,
        GraphCmd::Join { first, second } => {
            let (a, b) = two_graphs(first, second)?;
            join(&a, &b)?
        }
        GraphCmd::Product { first, second } => {
            let (a, b) = two_graphs(first, second)?;
            cartesian_product(&a, &b)
        }
        GraphCmd::Merge { first, second, w1, w2 } => {
            let (a, b) = two_graphs(first, second)?;
            merge(&a, &b, &MergeWeights::new(parse_rational(w1)?, parse_rational(w2)?))?
        }
        GraphCmd::Add { first, second } => {
            let (a, b) = two_graphs(first, second)?;
            add(&a, &b)?
        }
        GraphCmd::Scale { input, by } => scale(&load_graph(&read_input(input)?)?, &parse_rational(by)?)?,
        GraphCmd::Random { n, p, seed } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Failure::Usage("edge probability must lie in [0, 1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut edges = Vec::new();
            for i in 0..*n {
                for j in i + 1..*n {
                    if rng.random_bool(*p) {
                        edges.push((i, j, pst_core::matrix::rational(1)));
                    }
                }
            }
            WeightedGraph::from_edges(*n, edges)?
        }
        GraphCmd::Laplacian { input } => {
            let g = load_graph(&read_input(input)?)?;
            return Ok(Outcome::ok(g.laplacian().to_string()));
        }
    };
    Ok(Outcome::ok(g.to_json()))
}

fn two_graphs(a: &str, b: &str) -> CliResult<(WeightedGraph, WeightedGraph)> {
    let (ta, tb) = read_pair(a, b)?;
    Ok((load_graph(&ta)?, load_graph(&tb)?))
}

/// `1-2,2-3:1/2`: 1-based endpoints, optional rational weight (default 1).
fn parse_edges(n: usize, spec: &str) -> CliResult<WeightedGraph> {
    let mut edges = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (ends, w) = match item.split_once(':') {
            Some((e, w)) => (e, parse_rational(w)?),
            None => (item, pst_core::matrix::rational(1)),
        };
        let (a, b) = ends
            .split_once('-')
            .ok_or_else(|| Failure::Usage(format!("edge `{item}` must look like i-j or i-j:w")))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("bad vertex `{s}`")));
        edges.push((vertex(parse(a)?, n)?, vertex(parse(b)?, n)?, w));
    }
    Ok(WeightedGraph::from_edges(n, edges)?)
}

fn pair_of(pair: &[usize], n: usize) -> CliResult<(usize, usize)> {
    match pair {
        [j, k] => Ok((vertex(*j, n)?, vertex(*k, n)?)),
        _ => Err(Failure::Usage("--pair takes two vertices".into())),
    }
}

fn pst_cmd(c: &PstCmd) -> CliResult<Outcome> {
    match c {
        PstCmd::Check { graph, pair, hadamard } => {
            let cert = load_certificate(&read_input(graph)?, hadamard.as_deref())?;
            let (j, k) = pair_of(pair, cert.n())?;
            let exact = pst_mod4(&cert, j, k)?;
            let t = PiMultiple::half();
            let p = Propagator::from_certificate(&cert).fidelity(t.to_f64(), j, k);
            if exact != (1.0 - p <= PST_TOLERANCE) {
                return Err(Error::Numeric(format!("oracle fidelity {p} contradicts the exact decision")).into());
            }
            let report = PstReport {
                verdict: if exact { Verdict::Pst } else { Verdict::None },
                pairs: if exact { vec![(j.min(k), j.max(k))] } else { Vec::new() },
                time: t,
                rule: "mod4".into(),
                fidelity: Some(p),
            };
            Ok(Outcome::report(&report))
        }
        PstCmd::Pairs { input, hadamard } => {
            let cert = load_certificate(&read_input(input)?, hadamard.as_deref())?;
            Ok(Outcome::report(&pst_pairs(&cert)?))
        }
    }
}

fn cubelike_cmd(c: &CubelikeCmd, parallel: bool, out: Option<&Path>) -> CliResult<Outcome> {
    match c {
        CubelikeCmd::Build(a) => Ok(Outcome::ok(a.load()?.build()?.to_json())),
        CubelikeCmd::Sigma(a) => {
            let set = a.load()?;
            let report = pst_by_sigma(&set);
            let mut out = json!({
                "sigma": format!("{:0width$b}", set.sigma(), width = set.d() as usize),
                "report": serde_json::from_str::<Value>(&report.to_json()).expect("report JSON"),
            });
            if set.sigma() == 0 {
                let d = code_weight_gcd(&set)?;
                out["code_gcd"] = json!(d);
                if d > 0 {
                    out["candidate_time"] = json!(PiMultiple::half().scaled(&pst_core::matrix::ratio(1, d as i64)).to_string());
                }
            }
            Ok(Outcome::ok(out.to_string()))
        }
        CubelikeCmd::Enum { dim, degree, connected, bipartite, sigma_nonzero, count } => {
            let filter = Filter { connected: *connected, degree: *degree, bipartite: *bipartite, sigma_nonzero: *sigma_nonzero };
            if !parallel {
                let sets = enumerate(*dim, filter)?;
                if *count {
                    return Ok(Outcome::ok(sets.count().to_string()));
                }
                stream_lines(out, sets)?;
                return Ok(Outcome { text: String::new(), code: 0, streamed: true });
            }
            let sets: Vec<ConnectionSet> = enumerate_parallel(*dim, &filter)?;
            if *count {
                return Ok(Outcome::ok(sets.len().to_string()));
            }
            Ok(Outcome::ok(sets.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")))
        }
        CubelikeCmd::Decompose { input, matrix } => {
            let text = read_input(input)?;
            let a: QMatrix = if *matrix { text.parse()? } else { load_graph(&text)?.adjacency().clone() };
            let d = decompose_standard(&a)?;
            Ok(Outcome::ok(
                json!({ "d": d.set.d(), "elements": d.set.bitstrings(), "loops": d.loops }).to_string(),
            ))
        }
        CubelikeCmd::Family { k, deg, set } => {
            let (c, g) = regular_pst_family(*k, *deg)?;
            Ok(Outcome::ok(if *set { c.to_text() } else { g.to_json() }))
        }
    }
}

fn construction_report(c: &Construction, extra: Value) -> String {
    let mut v = serde_json::from_str::<Value>(&c.report.to_json()).expect("report JSON");
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    v.to_string()
}

fn family_cmd(c: &FamilyCmd) -> CliResult<Outcome> {
    match c {
        FamilyCmd::Regular { k, deg, report } => {
            let m = regular_family(*k, *deg)?;
            Ok(Outcome::ok(if *report {
                construction_report(&m.construction, json!({ "recipe": m.recipe.to_string() }))
            } else {
                m.construction.graph.to_json()
            }))
        }
        FamilyCmd::Hypercube { weights, report } => {
            let h = weighted_hypercube(weights)?;
            Ok(Outcome::ok(if *report {
                construction_report(&h.construction, json!({ "distance": h.distance() }))
            } else {
                h.construction.graph.to_json()
            }))
        }
        FamilyCmd::Order12 { report } => {
            let c = order12_merge()?;
            Ok(Outcome::ok(if *report { construction_report(&c, json!({})) } else { c.graph.to_json() }))
        }
    }
}

fn pgst_cmd(c: &PgstCmd) -> CliResult<Outcome> {
    match c {
        PgstCmd::Approx { weight, class, count, max_scan } => {
            let x: QuadraticIrrational = weight.parse()?;
            let cls: ParityClass = class.parse()?;
            let pairs = pgst_approximants_within(&x, cls, *count, *max_scan)?;
            Ok(Outcome::ok(pairs.iter().map(|(u, v)| format!("{u}/{v}")).collect::<Vec<_>>().join("\n")))
        }
        PgstCmd::Sequence { first, second, w1, w2, pair, count, hadamard } => {
            let (g1, g2) = two_graphs(first, second)?;
            let h = match hadamard {
                Some(spec) => hadamard_from_spec(spec)?,
                None => catalog(g1.n())?,
            };
            let (c1, c2) = common_hadamard(&g1, &g2, &[h])?;
            let (p, q) = pair_of(pair, 2 * g1.n())?;
            let w1: MergeWeight = w1.parse()?;
            let w2: MergeWeight = w2.parse()?;
            let points = pgst_sequence(&c1, &c2, &w1, &w2, p, q, *count)?;
            let rows: Vec<Value> = points
                .iter()
                .map(|pt| {
                    json!({
                        "u": pt.u.to_string(),
                        "v": pt.v.to_string(),
                        "class": pt.class.to_string(),
                        "case": pt.case.to_string(),
                        "time": pt.time.to_string(),
                        "fidelity": pt.fidelity,
                        "lower_bound": pt.lower_bound,
                        "bound_informative": pt.bound_is_informative(),
                    })
                })
                .collect();
            Ok(Outcome::ok(serde_json::to_string_pretty(&rows).expect("sequence JSON")))
        }
    }
}

fn analyze_cmd(c: &AnalyzeCmd, parallel: bool) -> CliResult<Outcome> {
    match c {
        AnalyzeCmd::Timing { input, pair, time, h, hadamard } => {
            let cert = load_certificate(&read_input(input)?, hadamard.as_deref())?;
            let (j, k) = pair_of(pair, cert.n())?;
            let t0: PiMultiple = time.parse()?;
            let d = timing_drop(&cert, j, k, &t0, *h)?;
            Ok(Outcome::ok(
                json!({
                    "drop": d.drop,
                    "ring_sum": d.ring_sum,
                    "ring_drop": d.ring_drop(),
                    "ring_sum_matrix": ring_sum_matrix(&cert, j, *h),
                })
                .to_string(),
            ))
        }
        AnalyzeCmd::Sparsity { r, max_k } => {
            let report = verify_sparsity_corpus(*r, *max_k, parallel)?;
            Ok(Outcome { text: report.to_json(), code: if report.passed() { 0 } else { 1 }, streamed: false })
        }
        AnalyzeCmd::Eigencount { r } => {
            let s = eigencount_solve(*r)?;
            let counts: Vec<Value> = s
                .counts
                .iter()
                .enumerate()
                .map(|(i, c)| json!({ "eigenvalue": 2 * (i + 1), "constant": c.constant.to_string(), "per_n": c.per_n.to_string() }))
                .collect();
            let order = match &s.order {
                OrderConstraint::Exact(n) => json!({ "exact": n.to_string() }),
                OrderConstraint::AtMost(n) => json!({ "at_most": n.to_string() }),
            };
            Ok(Outcome::ok(json!({ "r": s.r, "order": order, "counts": counts }).to_string()))
        }
    }
}

fn fidelity_cmd(c: &FidelityCmd) -> CliResult<Outcome> {
    match c {
        FidelityCmd::Curve { input, pair, t_max, steps, dynamics } => {
            let g = load_graph(&read_input(input)?)?;
            let (j, k) = pair_of(pair, g.n())?;
            let t: PiMultiple = t_max.parse()?;
            let dynamics = match dynamics {
                DynamicsArg::Laplacian => Dynamics::Laplacian,
                DynamicsArg::Adjacency => Dynamics::Adjacency,
            };
            let prop = Propagator::for_graph(&g, dynamics)?;
            Ok(Outcome::ok(fidelity_csv(&fidelity_curve(&prop, j, k, t.to_f64(), *steps)?)))
        }
    }
}
