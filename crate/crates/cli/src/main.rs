//! `kfvd`: deadlock (knot) detection and knot-free vertex deletion.
//!
//! Exit codes: 0 yes / knot-free, 1 no / knots present, 2 input error,
//! 3 solver precondition unmet. JSON goes to stdout, logs to stderr.

use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use kfvd::generators::{gen_mis_gadget, gen_random, gen_waitfor};
use kfvd::harness::{bench_instance, instance_digest, solve, SolveOptions};
use kfvd::io::{graph_to_string, parse_graph, parse_mis, parse_solution, write_graph, write_solution, GraphFile, SolutionRecord};
use kfvd::metrics::{Caps, ParamReport, DEFAULT_KWIDTH_CAP, DEFAULT_PATH_CAP, DFVS_SOFT_CAP};
use kfvd::reduction::exhaustive_reduce;
use kfvd::treewidth::read_td;
use kfvd::{find_knots, verify_solution, Algorithm, Digraph, DisjointInstance, Error, VertexSet};
use serde_json::json;

#[derive(Parser)]
#[command(name = "kfvd", version, about = "Knot detection and knot-free vertex deletion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Largest feedback vertex set searched for.
    #[arg(long, default_value_t = DFVS_SOFT_CAP)]
    cap_dfv: usize,
    #[arg(long, default_value_t = DEFAULT_KWIDTH_CAP)]
    cap_kwidth: usize,
    #[arg(long, default_value_t = DEFAULT_PATH_CAP)]
    cap_path: usize,
}

impl From<CapArgs> for Caps {
    fn from(c: CapArgs) -> Self {
        Caps {
            dfv_limit: c.cap_dfv,
            kwidth: c.cap_kwidth,
            longest_path: c.cap_path,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Report the knots (deadlocked groups) of a graph.
    Detect { graph: PathBuf },
    /// Decide whether deleting at most k vertices makes the graph knot-free.
    Solve {
        graph: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value = "bruteforce")]
        algo: Algorithm,
        /// Feedback vertex set, as comma-separated labels.
        #[arg(long, value_delimiter = ',')]
        dfvs: Option<Vec<String>>,
        /// Tree decomposition file for tw-dp.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Also write the solution record here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Check a solution file against a graph.
    Verify { graph: PathBuf, solution: PathBuf },
    /// Apply the reduction rules exhaustively.
    Reduce {
        graph: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Write the reduced graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural parameters: dfv, K-width, longest path, knots.
    Stats {
        graph: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run every applicable solver on each instance and cross-check them.
    Bench {
        /// Directory of graph files; omit to use `--random` instances.
        corpus: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Budgets to try on every instance.
        #[arg(short, long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3])]
        k: Vec<usize>,
        /// Append records to this file instead of printing them.
        #[arg(long)]
        results: Option<PathBuf>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Hardness gadget from a multicolored independent set instance.
    MisGadget {
        mis: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Random {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Layered wait-for snapshot.
    Waitfor {
        #[arg(long, value_delimiter = ',', required = true)]
        layers: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        back_arcs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::NotAFeedbackSet(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn read_graph(path: &Path) -> anyhow::Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?.graph)
}

fn emit_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{v}");
}

fn labels(g: &Digraph, set: impl IntoIterator<Item = usize>) -> Vec<String> {
    set.into_iter().map(|v| g.label(v).to_string()).collect()
}

fn cmd_detect(graph: &Path) -> CmdResult {
    let g = read_graph(graph)?;
    let knots: Vec<Vec<String>> = find_knots(&g).into_iter().map(|k| labels(&g, k)).collect();
    let free = knots.is_empty();
    print_json(&json!({ "knot_free": free, "knots": knots }));
    Ok(if free { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    graph: &Path,
    k: usize,
    algo: Algorithm,
    dfvs: Option<Vec<String>>,
    td: Option<PathBuf>,
    out: Option<PathBuf>,
    caps: Caps,
) -> CmdResult {
    let g = read_graph(graph)?;
    let dfvs = dfvs
        .map(|ls| {
            ls.iter()
                .map(|l| g.vertex_by_label(l).ok_or_else(|| anyhow!("unknown vertex label `{l}`")))
                .collect::<anyhow::Result<Vec<_>>>()
        })
        .transpose()?;
    let td = td
        .map(|p| -> anyhow::Result<_> {
            let text = fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            Ok(read_td(&text)?)
        })
        .transpose()?;
    let opts = SolveOptions { dfvs, td, caps };
    let result = solve(algo, &g, k, &opts)?;
    let mut rec = SolutionRecord::from_solution(&g, k, &result.solution);
    rec.kernel_sizes = result.kernel_sizes;
    let line = write_solution(&rec);
    print!("{line}");
    if let Some(p) = out {
        fs::write(&p, &line).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(if rec.status.is_yes() { 0 } else { 1 })
}

fn cmd_verify(graph: &Path, solution: &Path) -> CmdResult {
    let g = read_graph(graph)?;
    let text = fs::read_to_string(solution).with_context(|| format!("reading {}", solution.display()))?;
    let rec = parse_solution(&text).context("parsing solution")?;
    let deleted: VertexSet = rec.deleted_ids(&g).context("resolving solution")?.into_iter().collect();
    let verdict = verify_solution(&DisjointInstance::new(g.clone(), rec.k), &deleted);
    print_json(&json!({
        "valid": verdict.valid,
        "k": rec.k,
        "deleted": labels(&g, deleted.iter().copied()),
        "sinks": labels(&g, verdict.sinks),
    }));
    Ok(if verdict.valid { 0 } else { 1 })
}

fn cmd_reduce(graph: &Path, k: usize, out: Option<PathBuf>) -> CmdResult {
    let g = read_graph(graph)?;
    let (h, trace) = exhaustive_reduce(&g, k);
    let steps: Vec<_> = trace
        .steps
        .iter()
        .map(|s| json!({ "rule": s.rule, "removed": labels(&g, s.removed.iter().copied()) }))
        .collect();
    if let Some(p) = &out {
        fs::write(p, graph_to_string(&h)).with_context(|| format!("writing {}", p.display()))?;
    }
    print_json(&json!({
        "k": trace.k,
        "n_before": g.n(),
        "n_after": h.n(),
        "steps": steps,
        "removed": labels(&g, trace.removed()),
    }));
    Ok(0)
}

fn cmd_stats(graph: &Path, caps: Caps) -> CmdResult {
    let g = read_graph(graph)?;
    let report = ParamReport::compute(&g, caps);
    print_json(&serde_json::to_value(&report).map_err(anyhow::Error::from)?);
    Ok(0)
}

fn cmd_gen(cmd: GenCommand) -> CmdResult {
    match cmd {
        GenCommand::MisGadget { mis, out } => {
            let text = fs::read_to_string(&mis).with_context(|| format!("reading {}", mis.display()))?;
            let mis = parse_mis(&text).context("parsing MIS instance")?;
            let gadget = gen_mis_gadget(&mis);
            let file = GraphFile {
                graph: gadget.graph,
                comments: vec![format!("budget {}", gadget.budget)],
            };
            emit_text(&write_graph(&file), out.as_deref())?;
        }
        GenCommand::Random { n, p, seed, out } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(anyhow!("arc probability {p} outside [0, 1]").into());
            }
            let g = gen_random(n, p, seed)?;
            emit_text(&graph_to_string(&g), out.as_deref())?;
        }
        GenCommand::Waitfor { layers, back_arcs, seed, out } => {
            let g = gen_waitfor(&layers, back_arcs, seed);
            emit_text(&graph_to_string(&g), out.as_deref())?;
        }
    }
    Ok(0)
}

fn load_corpus(dir: &Path) -> anyhow::Result<Vec<(String, Digraph)>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.is_file());
    paths.sort();
    paths
        .into_iter()
        .map(|p| Ok((p.display().to_string(), read_graph(&p)?)))
        .collect()
}

fn cmd_bench(
    corpus: Option<PathBuf>,
    random: Option<usize>,
    seed: u64,
    ks: &[usize],
    results: Option<PathBuf>,
    caps: Caps,
) -> CmdResult {
    let instances: Vec<(String, Digraph, Option<u64>)> = match (corpus, random) {
        (Some(dir), None) => load_corpus(&dir)?.into_iter().map(|(n, g)| (n, g, None)).collect(),
        (None, Some(count)) => (0..count as u64)
            .map(|i| {
                let s = seed + i;
                let g = gen_random(3 + (s % 7) as usize, [0.15, 0.25, 0.35, 0.5][(s % 4) as usize], s)?;
                Ok((format!("random:{s}"), g, Some(s)))
            })
            .collect::<Result<_, Error>>()?,
        _ => return Err(anyhow!("give either a corpus directory or --random N").into()),
    };
    let mut sink: Box<dyn std::io::Write> = match &results {
        Some(p) => Box::new(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .with_context(|| format!("opening {}", p.display()))?,
        ),
        None => Box::new(std::io::stdout().lock()),
    };
    let opts = SolveOptions {
        caps,
        ..Default::default()
    };
    let (mut runs, mut disagreements) = (0usize, 0usize);
    for (name, g, s) in &instances {
        log::info!("{name}: {} ({} vertices)", instance_digest(g), g.n());
        for &k in ks {
            let res = bench_instance(g, k, *s, &opts);
            for rec in &res.records {
                let line = serde_json::to_string(rec).map_err(anyhow::Error::from)?;
                writeln!(sink, "{line}").map_err(anyhow::Error::from)?;
                runs += 1;
            }
            for d in &res.disagreements {
                log::error!("{name} k={k}: {d}");
            }
            disagreements += res.disagreements.len();
        }
    }
    sink.flush().map_err(anyhow::Error::from)?;
    eprintln!("{} instances, {runs} runs, {disagreements} disagreements", instances.len());
    Ok(if disagreements == 0 { 0 } else { 1 })
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Detect { graph } => cmd_detect(&graph),
        Command::Solve {
            graph,
            k,
            algo,
            dfvs,
            td,
            out,
            caps,
        } => cmd_solve(&graph, k, algo, dfvs, td, out, caps.into()),
        Command::Verify { graph, solution } => cmd_verify(&graph, &solution),
        Command::Reduce { graph, k, out } => cmd_reduce(&graph, k, out),
        Command::Stats { graph, caps } => cmd_stats(&graph, caps.into()),
        Command::Gen(g) => cmd_gen(g),
        Command::Bench {
            corpus,
            random,
            seed,
            k,
            results,
            caps,
        } => cmd_bench(corpus, random, seed, &k, results, caps.into()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
