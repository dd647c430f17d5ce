//! nbspec: build non-backtracking graphs, compute spectra, verify the
//! structural theorems, run cospectrality censuses and emit plot data.

mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use nbspec_core::census::{run_census, CensusConfig, Grouping};
use nbspec_core::graph::{generate_nonisomorphic, parse_graph6, read_graph6_lines, Graph};
use nbspec_core::nb::{build_nb_graph, nb_laplacian_from_tilde, nb_laplacian_tilde, parity_matrix};
use nbspec_core::spectra::{eigenvalues, OperatorTag};
use nbspec_core::theory;
use nbspec_core::walks::{self, WalkQuery};
use std::path::Path;

#[derive(Parser)]
#[command(name = "nbspec", version, about)]
struct Cli {
    /// Worker threads for the census (NBSPEC_WORKERS as fallback).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Non-backtracking graph constructions.
    Nb {
        #[command(subcommand)]
        sub: NbCommand,
    },
    /// Eigenvalues of one operator for each input graph.
    Spectrum(SpectrumArgs),
    /// Run theorem verifiers; exit 0 iff every check passes.
    Check(CheckArgs),
    /// Walk probabilities: oracle, closed form, simulation.
    Walk(WalkArgs),
    /// Cospectrality census over a corpus.
    Census(CensusArgs),
    /// Scatter data of the NB adjacency and Laplacian spectra.
    Scatter(ScatterArgs),
}

#[derive(Subcommand)]
enum NbCommand {
    /// Build the NB graph and print its summary or a matrix.
    Build(NbBuildArgs),
}

#[derive(Args)]
struct NbBuildArgs {
    /// graph6 file (or a literal graph6 record).
    #[arg(long)]
    input: String,
    /// Also dump a matrix: b | nbl | nblt | p.
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: String,
    /// a | l | nba | nbl | nblt
    #[arg(long, default_value = "nbl")]
    operator: String,
    #[arg(long, default_value_t = 6)]
    precision: u32,
    /// csv | md | json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    input: String,
    /// gap | ap | ihara | pt | connectivity | cycles | bipartite | all
    #[arg(long, default_value = "all")]
    check: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Longest chordless cycle certified by the cycle checks.
    #[arg(long, default_value_t = 6)]
    max_cycle_len: usize,
}

#[derive(Args)]
struct WalkArgs {
    #[arg(long)]
    input: String,
    #[arg(long)]
    source: u16,
    #[arg(long)]
    target: u16,
    #[arg(long)]
    length: usize,
    /// Monte Carlo samples (0 skips the simulation).
    #[arg(long, default_value_t = 0)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct CensusArgs {
    /// graph6 corpus file(s); the built-in generator is used when absent.
    #[arg(long)]
    input: Vec<String>,
    /// Smallest vertex count for the built-in generator.
    #[arg(long, default_value_t = 4)]
    min_n: usize,
    /// Largest vertex count for the built-in generator (at most 7).
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    min_degree: Option<usize>,
    /// Comma-separated operator flags among a, l, nba, nbl, nblt.
    #[arg(long, default_value = "a,l,nba,nblt")]
    operators: String,
    /// n | nm | m | global
    #[arg(long, default_value = "n")]
    grouping: String,
    #[arg(long, default_value_t = 6)]
    precision: u32,
    /// csv | md | json
    #[arg(long, default_value = "md")]
    format: String,
    /// Also list the nontrivial cospectrality classes.
    #[arg(long, default_value_t = false)]
    list_mates: bool,
}

#[derive(Args)]
struct ScatterArgs {
    /// graph6 input; when absent an Erdos-Renyi graph is sampled.
    #[arg(long)]
    input: Option<String>,
    /// Vertex count of the sampled graph.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Expected average degree of the sampled graph.
    #[arg(long, default_value_t = 8.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: String,
}

fn main() {
    let cli = Cli::parse();
    let workers = cli
        .workers
        .or_else(|| std::env::var("NBSPEC_WORKERS").ok().and_then(|v| v.parse().ok()));
    if let Some(w) = workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global();
    }
    match run(cli.command) {
        Ok(all_passed) => std::process::exit(if all_passed { 0 } else { 1 }),
        Err(err) => {
            println!(
                "{}",
                serde_json::json!({ "error": format!("{err:#}") })
            );
            std::process::exit(2);
        }
    }
}

/// Reads graphs from a file path, or from a literal graph6 record.
fn load_graphs(input: &str) -> Result<Vec<Graph>> {
    if Path::new(input).exists() {
        let text = std::fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
        let mut graphs = Vec::new();
        for (line, parsed) in read_graph6_lines(&text) {
            graphs.push(parsed.map_err(|e| anyhow!("{input}:{line}: {e}"))?);
        }
        if graphs.is_empty() {
            bail!("{input} contains no graph6 records");
        }
        Ok(graphs)
    } else {
        Ok(vec![parse_graph6(input).map_err(|e| anyhow!("input is neither a file nor a graph6 record: {e}"))?])
    }
}

fn parse_operator(flag: &str) -> Result<OperatorTag> {
    OperatorTag::parse_flag(flag).ok_or_else(|| anyhow!("unknown operator flag {flag:?} (expect a, l, nba, nbl, nblt)"))
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Nb { sub: NbCommand::Build(args) } => nb_build(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Check(args) => check(args),
        Command::Walk(args) => walk(args),
        Command::Census(args) => census(args),
        Command::Scatter(args) => scatter(args),
    }
}

fn nb_build(args: NbBuildArgs) -> Result<bool> {
    for g in load_graphs(&args.input)? {
        let (reduced, _) = g.remove_isolated();
        let nb = build_nb_graph(&reduced);
        let summary = serde_json::json!({
            "graph6": nbspec_core::graph::write_graph6(&g),
            "n": g.n(),
            "m": g.edge_count(),
            "nb_nodes": nb.node_count(),
            "nb_arcs": nb.arc_count(),
            "nb_degrees": nb.nb_degrees(),
        });
        match args.matrix.as_deref() {
            None => println!("{summary}"),
            Some(which) => {
                let matrix = match which {
                    "b" => nb.matrix_b(),
                    "nbl" => nb_laplacian_from_tilde(&nb),
                    "nblt" => nb_laplacian_tilde(&nb),
                    "p" => parity_matrix(reduced.edge_count().max(1)),
                    other => bail!("unknown matrix {other:?} (expect b, nbl, nblt, p)"),
                };
                if args.format == "json" {
                    let rows: Vec<Vec<f64>> = (0..matrix.nrows())
                        .map(|i| (0..matrix.ncols()).map(|j| matrix[(i, j)]).collect())
                        .collect();
                    println!("{}", serde_json::json!({ "summary": summary, "matrix": rows }));
                } else {
                    println!("{summary}");
                    print!("{}", output::matrix_csv(&matrix));
                }
            }
        }
    }
    Ok(true)
}

fn spectrum(args: SpectrumArgs) -> Result<bool> {
    let op = parse_operator(&args.operator)?;
    for g in load_graphs(&args.input)? {
        let record = nbspec_core::census::fingerprint_graph(&g, &[op], args.precision)?;
        let fp = &record.fingerprints[&op];
        match args.format.as_str() {
            "json" => println!(
                "{}",
                serde_json::json!({
                    "graph6": record.graph6,
                    "operator": op.flag(),
                    "dimension": fp.dimension,
                    "precision": args.precision,
                    "eigenvalues": fp.rounded.iter().map(|&(re, im)| {
                        let s = 10f64.powi(args.precision as i32);
                        serde_json::json!([re as f64 / s, im as f64 / s])
                    }).collect::<Vec<_>>(),
                })
            ),
            "md" => println!("| {} | {} | {} |", record.graph6, op.flag(), fp.render()),
            _ => {
                for &(re, im) in &fp.rounded {
                    let s = 10f64.powi(args.precision as i32);
                    println!("{},{:.p$},{:.p$}", record.graph6, re as f64 / s, im as f64 / s, p = args.precision as usize);
                }
            }
        }
    }
    Ok(true)
}

fn check(args: CheckArgs) -> Result<bool> {
    let graphs = load_graphs(&args.input)?;
    let which: Vec<&str> = if args.check == "all" {
        vec!["gap", "ap", "ihara", "pt", "connectivity", "cycles", "bipartite"]
    } else {
        vec![args.check.as_str()]
    };
    let mut all_pass = true;
    for g in &graphs {
        for &name in &which {
            let report = run_check(g, name, args.seed, args.max_cycle_len)?;
            all_pass &= report.pass;
            println!("{}", serde_json::to_string(&report)?);
        }
    }
    Ok(all_pass)
}

fn run_check(g: &Graph, name: &str, seed: u64, max_cycle_len: usize) -> Result<theory::CheckReport> {
    let report = match name {
        "gap" => {
            let r = theory::check_gap_bound(g)?;
            theory::CheckReport::new("gap", g, r.pass, r)
        }
        "ap" => {
            let exact = theory::ap_spectrum_exact(g)?;
            let nb = build_nb_graph(g);
            let bp = nb.matrix_b() * parity_matrix(g.edge_count());
            let numeric = eigenvalues(&bp)?;
            let pass = nbspec_core::spectra::match_multisets(exact.values(), numeric.values(), 1e-8);
            theory::CheckReport::new(
                "ap",
                g,
                pass,
                serde_json::json!({ "dimension": exact.len(), "tolerance": 1e-8 }),
            )
        }
        "ihara" => {
            let r = theory::ihara_bass_check(g, 10, seed);
            theory::CheckReport::new("ihara", g, r.pass, r)
        }
        "pt" => {
            let r = theory::check_pt_and_padjoint(g)?;
            theory::CheckReport::new("pt", g, r.pass, r)
        }
        "connectivity" => {
            let r = theory::check_connectivity_theorem(g)?;
            theory::CheckReport::new("connectivity", g, r.pass, r)
        }
        "bipartite" => {
            let r = theory::check_bipartite(g);
            theory::CheckReport::new("bipartite", g, r.pass, r)
        }
        "cycles" => {
            let r = cycle_check(g, max_cycle_len)?;
            let pass = r["pass"].as_bool().unwrap_or(false);
            theory::CheckReport::new("cycles", g, pass, r)
        }
        other => bail!("unknown check {other:?}"),
    };
    Ok(report)
}

/// Certifies every applicable cycle theorem on the chordless cycles of `g`.
fn cycle_check(g: &Graph, max_cycle_len: usize) -> Result<serde_json::Value> {
    let deg = g.degrees();
    let mut pass = true;
    let mut entries = Vec::new();
    for cycle in theory::find_chordless_cycles(g, max_cycle_len) {
        let degs: Vec<usize> = cycle.vertices().iter().map(|&v| deg[v as usize]).collect();
        let mut entry = serde_json::json!({
            "cycle": cycle.vertices(),
            "degrees": degs,
        });
        let constant = degs.iter().all(|&d| d == degs[0]);
        let hubs: Vec<usize> = degs.iter().filter(|&&d| d > 2).copied().collect();
        if constant {
            let cert = theory::cycle_eigenpair_regular(g, &cycle, degs[0], theory::Sign::Minus)?;
            pass &= cert.certified(1e-10);
            entry["regular_minus"] = serde_json::json!({ "lambda": cert.lambda, "residual": cert.residual });
            if cycle.len() % 2 == 0 {
                let cert = theory::cycle_eigenpair_regular(g, &cycle, degs[0], theory::Sign::Plus)?;
                pass &= cert.certified(1e-10);
                entry["regular_plus"] = serde_json::json!({ "lambda": cert.lambda, "residual": cert.residual });
            }
        } else if hubs.len() == 1 && degs.iter().filter(|&&d| d == 2).count() == degs.len() - 1 {
            let cert = theory::cycle_eigenpair_hub(g, &cycle, hubs[0], theory::Sign::Minus)?;
            pass &= cert.certified(1e-10);
            entry["hub_minus"] = serde_json::json!({ "lambda": cert.lambda, "residual": cert.residual });
            if cycle.len() % 2 == 0 {
                let cert = theory::cycle_eigenpair_hub(g, &cycle, hubs[0], theory::Sign::Plus)?;
                pass &= cert.certified(1e-10);
                entry["hub_plus"] = serde_json::json!({ "lambda": cert.lambda, "residual": cert.residual });
            }
        }
        if !g.is_cycle_graph() {
            let outcome = theory::cycle_support_eigenpair(g, &cycle)?;
            if let Some(cert) = &outcome.certificate {
                pass &= cert.certified(1e-10);
            }
            entry["support"] = serde_json::json!({
                "mu": outcome.mu,
                "present": outcome.present,
                "residual": outcome.certificate.as_ref().map(|c| c.residual),
            });
        }
        entries.push(entry);
    }
    Ok(serde_json::json!({ "cycles": entries, "pass": pass }))
}

fn walk(args: WalkArgs) -> Result<bool> {
    let g = load_graphs(&args.input)?.remove(0);
    let q = WalkQuery { source: args.source, target: args.target, length: args.length };
    let report = walks::formula_report(&g, &q)?;
    let simulated = if args.samples > 0 {
        Some(walks::simulate(&g, &q, args.samples, args.seed)?)
    } else {
        None
    };
    println!(
        "{}",
        serde_json::json!({
            "graph6": nbspec_core::graph::write_graph6(&g),
            "source": q.source,
            "target": q.target,
            "n": q.length,
            "exact": report.exact,
            "closed_form": report.printed,
            "closed_form_alt_subscript": report.alt_subscript,
            "closed_form_matches": report.printed_matches,
            "simulated": simulated.map(|e| e.p_hat),
            "stderr": simulated.map(|e| e.stderr),
            "seed": args.seed,
        })
    );
    Ok(true)
}

fn census(args: CensusArgs) -> Result<bool> {
    let mut corpus: Vec<Graph> = Vec::new();
    if args.input.is_empty() {
        let max_n = args.max_n.ok_or_else(|| anyhow!("census needs --input or --max-n"))?;
        for n in args.min_n..=max_n {
            corpus.extend(generate_nonisomorphic(n, 0)?);
        }
    } else {
        for path in &args.input {
            corpus.extend(load_graphs(path)?);
        }
    }
    let mut operators = Vec::new();
    for flag in args.operators.split(',') {
        operators.push(parse_operator(flag.trim())?);
    }
    let grouping = Grouping::parse_flag(&args.grouping)
        .ok_or_else(|| anyhow!("unknown grouping {:?} (expect n, nm, m, global)", args.grouping))?;
    let config = CensusConfig {
        operators,
        grouping,
        precision: args.precision,
        min_degree: args.min_degree,
    };
    let table = run_census(&corpus, config)?;
    print!("{}", output::render_census(&table, &args.format, args.list_mates)?);
    Ok(true)
}

fn scatter(args: ScatterArgs) -> Result<bool> {
    let g = match &args.input {
        Some(input) => load_graphs(input)?.remove(0),
        None => erdos_renyi(args.n, args.alpha, args.seed),
    };
    let (reduced, _) = g.remove_isolated();
    let nb = build_nb_graph(&reduced);
    let spec_a = eigenvalues(&nb.matrix_b())?;
    let spec_l = eigenvalues(&nb_laplacian_from_tilde(&nb))?;
    let radius_a = (args.alpha - 1.0).sqrt();
    let radius_l = 1.0 / radius_a;
    if args.format == "json" {
        println!(
            "{}",
            serde_json::json!({
                "graph6": nbspec_core::graph::write_graph6(&g),
                "alpha": args.alpha,
                "radius_nba": radius_a,
                "radius_nbl": radius_l,
                "nba": spec_a.values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "nbl": spec_l.values().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            })
        );
    } else {
        println!("# alpha={} radius_nba={} radius_nbl={}", args.alpha, radius_a, radius_l);
        println!("operator,re,im");
        for z in spec_a.values() {
            println!("nba,{},{}", z.re, z.im);
        }
        for z in spec_l.values() {
            println!("nbl,{},{}", z.re, z.im);
        }
    }
    Ok(true)
}

/// G(n, p) with p = alpha/(n-1), seeded; plot data only.
fn erdos_renyi(n: usize, alpha: f64, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = (alpha / (n as f64 - 1.0)).clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..n as u16 {
        for v in u + 1..n as u16 {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("sampled edges are simple")
}
