//! `fgw`: command-line front end for the fgw library.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgw::chebyshev::{cheb, symmetrized, verify_positivity, ChebKind, SymKind};
use fgw::entropy::{entropy_gradient, min_entropy_weights, numerical_min_entropy, sinkhorn_min_entropy, EntropyProblem};
use fgw::enumeration::{
    cycle_counts, directed_zeta_check, free_group_counts, ihara_identity_check, primitive_from_counts, zeta,
};
use fgw::freegroup::{build_gr, count_cyclically_reduced, homology_gf, FreeRank};
use fgw::graph::parse_rational;
use fgw::homodist::{
    bias_ranking, clt_sigma2, equidistribution_gap, limiting_variance, modp_counts_via, total_exponent_moments,
    ModPRoute,
};
use fgw::linegraph::{backtrackless_variance, backtrackless_vertex_variance, lift, line_digraph};
use fgw::walkstats::{group_walk_distribution, modp_walk_distribution, walk_variance, GroupLabeling};
use fgw::{BigRational, Error, Graph};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use output::{strings, Format, Output, Table};

#[derive(Parser)]
#[command(name = "fgw", version, about = "Cycle statistics for free groups and regular graphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Tolerance for floating-point solvers.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Seed for Monte Carlo sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of cyclically reduced words of a given length.
    Count(RankLength),
    /// Cyclically reduced words by homology class.
    Homology(RankLength),
    /// Cyclically reduced words by total exponent modulo a prime.
    Modp {
        #[command(flatten)]
        rl: RankLength,
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value = "transfer")]
        route: Route,
    },
    /// Exact and limiting variance of the total exponent.
    Clt {
        #[command(flatten)]
        rl: RankLength,
        /// Number of Monte Carlo samples (0 disables sampling).
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Element, cyclically reduced and conjugacy-class counts.
    Conj {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        max_length: u32,
    },
    /// Chebyshev polynomials and their symmetrised forms.
    Cheb {
        #[command(subcommand)]
        cmd: ChebCommand,
    },
    /// Graph commands; with `--rank r` and no subcommand, prints `G_r`.
    #[command(args_conflicts_with_subcommands = true)]
    Graph {
        #[arg(long)]
        rank: Option<u32>,
        #[command(subcommand)]
        cmd: Option<GraphCommand>,
    },
}

#[derive(Args)]
struct RankLength {
    #[arg(long)]
    rank: u32,
    #[arg(long)]
    length: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Laurent,
    Transfer,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    T,
    U,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymFamily {
    R,
    S,
}

#[derive(Args)]
struct SymArgs {
    #[arg(long, value_enum)]
    kind: SymFamily,
    #[arg(long)]
    n: usize,
    /// Parameter `c` as an integer, decimal or fraction `p/q`.
    #[arg(long)]
    c: String,
    /// Number of variables.
    #[arg(long, default_value_t = 1)]
    k: usize,
}

#[derive(Subcommand)]
enum ChebCommand {
    /// Integer coefficients of `T_n` or `U_n`, lowest degree first.
    Coeffs {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
    },
    /// Exact Laurent coefficients of `R_n` or `S_n`.
    Symmetrized(SymArgs),
    /// Checks that every coefficient of `R_n` or `S_n` is nonnegative.
    VerifyPositivity(SymArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    /// `det(I − uA)` with cycle and primitive cycle counts.
    Zeta {
        file: PathBuf,
        /// Number of cycle counts to report.
        #[arg(long, default_value_t = 8)]
        cycles: usize,
    },
    /// Ihara's and Bass's determinant forms (undirected) or base against line digraph (directed).
    Ihara { file: PathBuf },
    /// The line digraph in the graph file format.
    Linegraph { file: PathBuf },
    /// Variance per step of the vertex labels along long closed walks.
    WalkVariance {
        file: PathBuf,
        /// Walks without backtracking, through the line digraph.
        #[arg(long)]
        backtrackless: bool,
    },
    /// Closed walks by the sum of integer labels modulo a prime.
    Modp {
        file: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        length: usize,
    },
    /// Closed walks by the product of finite-group labels.
    GroupDist {
        file: PathBuf,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Topological entropy of vertex weights.
    Entropy {
        file: PathBuf,
        /// Whitespace-separated weights; defaults to the vertex labels, or 1 when unlabelled.
        #[arg(long, conflicts_with = "minimize")]
        weights: Option<PathBuf>,
        /// Minimise the entropy over weights with unit sum.
        #[arg(long)]
        minimize: bool,
    },
}

/// Failure carrying its exit code.
enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Run = std::result::Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Run {
    match &cli.cmd {
        Command::Count(rl) => count(rl),
        Command::Homology(rl) => homology(rl),
        Command::Modp { rl, prime, route } => modp(rl, *prime, *route),
        Command::Clt { rl, samples } => clt(rl, *samples, cli.seed),
        Command::Conj { rank, max_length } => conj(*rank, *max_length),
        Command::Cheb { cmd } => cheb_cmd(cmd),
        Command::Graph { rank: Some(r), cmd: None } => {
            let g = build_gr(*r)?;
            Ok(graph_output("graph", &g).param("rank", *r))
        }
        Command::Graph { rank: None, cmd: Some(cmd) } => graph_cmd(cmd, cli.tol),
        Command::Graph { .. } => Err(Failure::Usage("`graph` needs `--rank <r>` or a subcommand".into())),
    }
}

fn count(rl: &RankLength) -> Run {
    let n = count_cyclically_reduced(rl.rank, rl.length)?;
    Ok(Output::new("count", json!(n.to_string()))
        .param("rank", rl.rank)
        .param("length", rl.length)
        .text(n.to_string()))
}

fn homology(rl: &RankLength) -> Run {
    let gf = homology_gf(rl.rank, rl.length)?;
    let r = rl.rank as usize;
    let mut header: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
    header.push("count".into());
    let mut table = Table { header, rows: Vec::new() };
    let mut classes = Vec::new();
    for (e, c) in gf.sorted_terms() {
        let mut row = strings(&e);
        row.push(c.to_string());
        table.push(row);
        classes.push(json!({ "exponent": e.to_vec(), "count": c.to_string() }));
    }
    Ok(Output::new("homology", json!({ "classes": classes }))
        .param("rank", rl.rank)
        .param("length", rl.length)
        .table(table))
}

fn modp(rl: &RankLength, p: u64, route: Route) -> Run {
    let route = match route {
        Route::Laurent => ModPRoute::Laurent,
        Route::Transfer => ModPRoute::Transfer,
    };
    let d = modp_counts_via(rl.rank, rl.length, p, route)?;
    let mut result = json!({ "counts": strings(&d.counts), "total": d.total().to_string() });
    let mut out = Output::new("modp", Value::Null);
    if p > 2 {
        result["gap"] = json!(equidistribution_gap(rl.rank, rl.length, p)?);
        let b = bias_ranking(rl.rank, rl.length, p)?;
        result["ranking"] = json!(b.groups);
        result["predicted"] = json!(b.predicted);
        result["matches_prediction"] = json!(b.matches_prediction);
        if !b.hypothesis {
            out = out.warn("no nontrivial character dominates; the ranking need not persist");
        }
    }
    let mut table = Table::new(&["residue", "count"]);
    for (q, c) in d.counts.iter().enumerate() {
        table.push(vec![q.to_string(), c.to_string()]);
    }
    out.result = result;
    Ok(out.param("rank", rl.rank).param("length", rl.length).param("prime", p).table(table))
}

fn clt(rl: &RankLength, samples: usize, seed: u64) -> Run {
    let rank = FreeRank::new(rl.rank)?;
    let c = rank.c();
    let (mean, var) = total_exponent_moments(rl.rank, rl.length)?;
    let per_step = &var / BigRational::from_integer(rl.length.into());
    let mut result = json!({
        "c": c,
        "mean": mean.to_string(),
        "variance": var.to_string(),
        "variance_per_step": per_step.to_f64(),
        "limiting_variance": limiting_variance(c, 1).ok(),
        "closed_form_sigma2": clt_sigma2(c, 1).ok(),
    });
    let mut out = Output::new("clt", Value::Null);
    if samples > 0 {
        let (m, v) = sample_total_exponent(rl.rank, rl.length, samples, seed);
        result["sampled"] = json!({ "samples": samples, "seed": seed, "mean": m, "variance_per_step": v / rl.length as f64 });
        out = out.warn("sampled values are Monte Carlo estimates");
    }
    out.result = result;
    Ok(out.param("rank", rl.rank).param("length", rl.length))
}

/// Uniform cyclically reduced words by rejection from uniform reduced words.
fn sample_total_exponent(r: u32, n: u32, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = 2 * r;
    let mut sums = Vec::with_capacity(samples);
    while sums.len() < samples {
        let first = rng.gen_range(0..q);
        let (mut prev, mut total) = (first, 0i64);
        total += if first % 2 == 0 { 1 } else { -1 };
        for _ in 1..n {
            let mut x = rng.gen_range(0..q - 1);
            if x >= (prev ^ 1) {
                x += 1;
            }
            total += if x % 2 == 0 { 1 } else { -1 };
            prev = x;
        }
        if n == 1 || prev != (first ^ 1) {
            sums.push(total as f64);
        }
    }
    let m = sums.iter().sum::<f64>() / samples as f64;
    let v = sums.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (samples as f64 - 1.0).max(1.0);
    (m, v)
}

fn conj(k: u32, max_length: u32) -> Run {
    let t = free_group_counts(k, max_length)?;
    let mut table = Table::new(&["length", "N", "C", "CC"]);
    for r in 0..t.max_length() {
        table.push(vec![(r + 1).to_string(), t.n[r].to_string(), t.c[r].to_string(), t.cc[r].to_string()]);
    }
    Ok(Output::new("conj", json!({ "N": strings(&t.n), "C": strings(&t.c), "CC": strings(&t.cc) }))
        .param("rank", k)
        .param("max_length", max_length)
        .table(table))
}

fn rational_arg(s: &str) -> std::result::Result<BigRational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::Usage(format!("cannot parse `{s}` as a rational number")))
}

fn sym_kind(k: SymFamily) -> SymKind {
    match k {
        SymFamily::R => SymKind::R,
        SymFamily::S => SymKind::S,
    }
}

fn cheb_cmd(cmd: &ChebCommand) -> Run {
    match cmd {
        ChebCommand::Coeffs { kind, n } => {
            let (k, name) = match kind {
                Kind::T => (ChebKind::T, "T"),
                Kind::U => (ChebKind::U, "U"),
            };
            let p = cheb(k, *n);
            let mut table = Table::new(&["degree", "coefficient"]);
            for (j, c) in p.coeffs.iter().enumerate() {
                table.push(vec![j.to_string(), c.to_string()]);
            }
            Ok(Output::new("cheb coeffs", json!({ "coefficients": strings(&p.coeffs) }))
                .param("kind", name)
                .param("n", *n)
                .table(table)
                .text(p.poly().to_string()))
        }
        ChebCommand::Symmetrized(a) => {
            let c = rational_arg(&a.c)?;
            let s = symmetrized(sym_kind(a.kind), a.n, &c, a.k)?;
            let mut header: Vec<String> = (1..=a.k).map(|i| format!("e{i}")).collect();
            header.push("coefficient".into());
            let mut table = Table { header, rows: Vec::new() };
            let mut terms = Vec::new();
            for (e, q) in s.terms() {
                let mut row = strings(&e);
                row.push(q.to_string());
                table.push(row);
                terms.push(json!({ "exponent": e.to_vec(), "coefficient": q.to_string() }));
            }
            Ok(Output::new("cheb symmetrized", json!({ "terms": terms }))
                .param("kind", format!("{:?}", sym_kind(a.kind)))
                .param("n", a.n)
                .param("c", c.to_string())
                .param("k", a.k)
                .table(table))
        }
        ChebCommand::VerifyPositivity(a) => {
            let c = rational_arg(&a.c)?;
            let rep = verify_positivity(sym_kind(a.kind), a.n, &c, a.k)?;
            Ok(Output::new("cheb verify-positivity", json!({ "positive": rep.positive, "witness": rep.witness }))
                .param("kind", format!("{:?}", sym_kind(a.kind)))
                .param("n", a.n)
                .param("c", c.to_string())
                .param("k", a.k))
        }
    }
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn read_graph(path: &Path) -> std::result::Result<Graph, Failure> {
    Ok(Graph::parse(&read_text(path)?)?)
}

fn graph_output(command: &str, g: &Graph) -> Output {
    let text = g.emit();
    let mut table = Table::new(&["u", "v", "multiplicity"]);
    let adj = g.adjacency();
    for u in 0..g.n() {
        let start = if g.is_directed() { 0 } else { u };
        for v in start..g.n() {
            if adj[(u, v)] > 0 {
                table.push(vec![u.to_string(), v.to_string(), adj[(u, v)].to_string()]);
            }
        }
    }
    Output::new(command, json!({ "graph": text })).table(table).text(text)
}

fn vertex_weights(g: &Graph) -> Vec<f64> {
    g.label_values().unwrap_or_else(|_| vec![1.0; g.n()])
}

fn graph_cmd(cmd: &GraphCommand, tol: f64) -> Run {
    match cmd {
        GraphCommand::Zeta { file, cycles } => {
            let g = read_graph(file)?;
            let z = zeta(&g);
            let n = cycle_counts(&g, *cycles)?;
            let p = primitive_from_counts(&n)?;
            let mut table = Table::new(&["length", "cycles", "primitive"]);
            for i in 0..n.len() {
                table.push(vec![(i + 1).to_string(), n[i].to_string(), p[i].to_string()]);
            }
            let text = z.to_string();
            Ok(Output::new(
                "graph zeta",
                json!({
                    "zeta": text,
                    "coefficients": strings(z.coeffs()),
                    "cycle_counts": strings(&n),
                    "primitive_counts": strings(&p),
                }),
            )
            .param("file", file.display().to_string())
            .table(table)
            .text(text))
        }
        GraphCommand::Ihara { file } => {
            let g = read_graph(file)?;
            let (check, left, right) = if g.is_directed() {
                (directed_zeta_check(&g)?, "base", "line_digraph")
            } else {
                (ihara_identity_check(&g)?, "ihara", "bass")
            };
            let text = format!("{left}: {}\n{right}: {}\nequal: {}", check.left, check.right, check.holds());
            Ok(Output::new(
                "graph ihara",
                json!({ left: check.left.to_string(), right: check.right.to_string(), "equal": check.holds() }),
            )
            .param("file", file.display().to_string())
            .text(text))
        }
        GraphCommand::Linegraph { file } => {
            let g = read_graph(file)?;
            let ld = line_digraph(&g)?;
            Ok(graph_output("graph linegraph", &ld.graph).param("file", file.display().to_string()))
        }
        GraphCommand::WalkVariance { file, backtrackless } => {
            let g = read_graph(file)?;
            let f = g.label_values()?;
            let result = if *backtrackless {
                let ld = line_digraph(&g)?;
                let lv = backtrackless_variance(&g, &lift(&ld, &f)?)?;
                json!({
                    "sigma2": backtrackless_vertex_variance(&g, &f)?,
                    "mean": lv.mean,
                    "line_digraph": { "sigma2": lv.sigma2, "via_ata": lv.via_ata, "closed_form": lv.printed },
                })
            } else {
                let wv = walk_variance(&g, &f)?;
                json!({ "sigma2": wv.sigma2, "mean": wv.mean, "op_norm_a0": wv.op_norm_a0, "degenerate": wv.degenerate })
            };
            Ok(Output::new("graph walk-variance", result)
                .param("file", file.display().to_string())
                .param("backtrackless", *backtrackless))
        }
        GraphCommand::Modp { file, prime, length } => {
            let g = read_graph(file)?;
            let f = g.integer_labels()?;
            let d = modp_walk_distribution(&g, &f, *prime, *length)?;
            let mut table = Table::new(&["residue", "count"]);
            for (q, c) in d.counts.iter().enumerate() {
                table.push(vec![q.to_string(), c.to_string()]);
            }
            Ok(Output::new("graph modp", json!({ "counts": strings(&d.counts), "total": d.total().to_string(), "gap": d.gap }))
                .param("file", file.display().to_string())
                .param("prime", *prime)
                .param("length", *length)
                .table(table))
        }
        GraphCommand::GroupDist { file, group, length } => {
            let g = read_graph(file)?;
            let lab = GroupLabeling::parse(&read_text(group)?, g.n())?;
            let d = group_walk_distribution(&g, &lab, *length)?;
            let mut out = Output::new(
                "graph group-dist",
                json!({
                    "counts": strings(&d.counts),
                    "total": d.total().to_string(),
                    "tv_distance": d.tv_distance,
                    "rate": d.rate,
                    "hypotheses": {
                        "generates": d.hypotheses.generates,
                        "not_in_one_coset": d.hypotheses.not_in_one_coset,
                        "witness": d.hypotheses.witness,
                    },
                }),
            );
            if !d.hypotheses.hold() {
                out = out.warn("equidistribution hypotheses fail; the distance need not tend to zero");
            }
            let mut table = Table::new(&["element", "count"]);
            for (x, c) in d.counts.iter().enumerate() {
                table.push(vec![x.to_string(), c.to_string()]);
            }
            Ok(out
                .param("file", file.display().to_string())
                .param("group", group.display().to_string())
                .param("length", *length)
                .table(table))
        }
        GraphCommand::Entropy { file, weights, minimize } => {
            let g = read_graph(file)?;
            let a = g.adjacency_f64();
            if *minimize {
                let num = numerical_min_entropy(&a, tol, 20_000)?;
                let prob = EntropyProblem::from_graph(&g, num.f.clone())?;
                let (_, grad) = entropy_gradient(&prob)?;
                let mut result = json!({
                    "s0": num.s0,
                    "f": num.f,
                    "gradient_norm": projected_norm(&grad),
                });
                if let Ok(m) = sinkhorn_min_entropy(&a) {
                    result["scaling"] = json!({ "s0": m.s0, "f": m.f });
                }
                if let Ok(m) = min_entropy_weights(&a) {
                    result["row_sum_formula"] = json!({ "s0": m.s0, "f": m.f });
                }
                return Ok(Output::new("graph entropy", result)
                    .param("file", file.display().to_string())
                    .param("minimize", true));
            }
            let f = match weights {
                Some(path) => parse_weights(&read_text(path)?)?,
                None => vertex_weights(&g),
            };
            let prob = EntropyProblem::from_graph(&g, f.clone())?;
            let (s0, grad) = entropy_gradient(&prob)?;
            let norm = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
            Ok(Output::new("graph entropy", json!({ "s0": s0, "f": f, "gradient": grad, "gradient_norm": norm }))
                .param("file", file.display().to_string()))
        }
    }
}

/// Norm of the gradient component tangent to the simplex.
fn projected_norm(g: &[f64]) -> f64 {
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    g.iter().map(|x| (x - mean).powi(2)).sum::<f64>().sqrt()
}

fn parse_weights(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    text.split_whitespace()
        .map(|t| {
            parse_rational(t)
                .and_then(|q| q.to_f64())
                .ok_or_else(|| Failure::Domain(format!("bad weight `{t}`")))
        })
        .collect()
}
