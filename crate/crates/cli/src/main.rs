//! `lore`: generate graphs, run budgeted solves, ablations, sweeps and bound checks.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lore_core::bound::paired_trajectory_report;
use lore_core::graph::{load_edge_list, save_edge_list, Family, GeneratorSpec, Graph};
use lore_core::harness::stats::{mean, overlap_phases, retention_ranges, sign_test_greater};
use lore_core::harness::{emit_outputs, run_ablation, run_cell, run_sweep, Instance, OutputPaths};
use lore_core::{ExperimentSpec, RunRecord, Strategy, Support};

#[derive(Parser)]
#[command(name = "lore", version, about = "Budgeted interaction routing for graph relaxations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random graph as an edge list
    Gen(GenArgs),
    /// Run one trajectory on one graph
    Solve(SolveArgs),
    /// Run every strategy on the configured graph sets
    Ablate(Common),
    /// Run the one-axis parameter sweeps
    Sweep(Common),
    /// Paired full/budgeted run with the error recursion report
    BoundCheck(BoundArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Er,
    Ba,
    Ws,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default `out`; bound-check writes only when given)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    recall: Option<Switch>,
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    refresh: Option<usize>,
    #[arg(long = "lambda-stab")]
    lambda_stab: Option<f64>,
}

#[derive(Args)]
struct FamilyFlags {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    rewire: f64,
}

impl FamilyFlags {
    fn family(&self) -> Option<Family> {
        self.family.map(|f| match f {
            FamilyArg::Er => Family::Er { p: self.p },
            FamilyArg::Ba => Family::Ba { m: self.m },
            FamilyArg::Ws => Family::Ws { k: self.k, rewire: self.rewire },
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyFlags,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    /// Edge-list file; otherwise a graph is generated from the family flags
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    family: FamilyFlags,
    /// Run with full support instead of routing
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    graph: PathBuf,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => with_pool(a.common.jobs, || solve(&a)),
        Command::Ablate(c) => with_pool(c.jobs, || ablate(&c)),
        Command::Sweep(c) => with_pool(c.jobs, || sweep(&c)),
        Command::BoundCheck(a) => bound_check(&a),
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("building thread pool")?
        .install(f)
}

impl Common {
    fn out_dir(&self) -> &Path {
        self.out.as_deref().unwrap_or(Path::new("out"))
    }
}

fn load_spec(common: &Common, base: ExperimentSpec) -> Result<ExperimentSpec> {
    let mut spec = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => base,
    };
    if let Some(s) = common.seed {
        spec.master_seed = s;
    }
    let d = &mut spec.dynamics;
    d.eta = common.eta.unwrap_or(d.eta);
    d.beta = common.beta.unwrap_or(d.beta);
    d.steps = common.steps.unwrap_or(d.steps);
    if let Some(r) = common.recall {
        d.recall_enabled = matches!(r, Switch::On);
    }
    let b = &mut spec.budget;
    b.rho = common.rho.unwrap_or(b.rho);
    b.gamma = common.gamma.unwrap_or(b.gamma);
    b.refresh = common.refresh.unwrap_or(b.refresh);
    b.lambda_stab = common.lambda_stab.unwrap_or(b.lambda_stab);
    if let Some(s) = common.strategy {
        b.strategy = s;
    }
    spec.validate()?;
    Ok(spec)
}

fn print_stdout(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn write_outputs(dir: &Path, records: &[RunRecord], spec: &impl Serialize, summary: Option<&Value>) -> Result<()> {
    let paths = OutputPaths::prepare(dir)?;
    emit_outputs(records, &paths, &serde_json::to_value(spec)?, summary)?;
    let failed = records.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        log::warn!("{failed} of {} runs failed; see summary.csv", records.len());
    }
    eprintln!("wrote {} runs to {}", records.len(), dir.display());
    Ok(())
}

fn gen(a: GenArgs) -> Result<()> {
    let (Some(family), Some(n)) = (a.family.family(), a.family.n) else {
        bail!("gen needs --family and --n");
    };
    let graph = GeneratorSpec { family, n, seed: a.seed }.generate()?;
    save_edge_list(&graph, &a.output)?;
    eprintln!("{} nodes, {} edges -> {}", graph.node_count(), graph.edge_count(), a.output.display());
    Ok(())
}

fn solve(a: &SolveArgs) -> Result<()> {
    let spec = load_spec(&a.common, ExperimentSpec::default())?;
    let (graph, id, family): (Graph, String, String) = match (&a.graph, a.family.family()) {
        (Some(path), None) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("graph").to_string();
            (load_edge_list(path)?, stem, "file".into())
        }
        (None, Some(family)) => {
            let Some(n) = a.family.n else { bail!("--family needs --n") };
            let g = GeneratorSpec { family, n, seed: spec.master_seed }.generate()?;
            (g, format!("{}-n{n}", family.tag()), family.tag().into())
        }
        (Some(_), Some(_)) => bail!("give either --graph or --family, not both"),
        (None, None) => bail!("solve needs --graph FILE or --family with --n"),
    };
    let inst = Instance::from_graph(graph, &id, &family, 0, spec.master_seed)?;
    let support = if a.full { Support::Full } else { Support::Budgeted(spec.budget) };
    let record = run_cell(&inst, &spec.dynamics, &support, None);
    if let Some(e) = &record.error {
        bail!("{}: {e}", record.run_id);
    }
    let summary = json!({
        "run_id": record.run_id,
        "final_size": record.final_size,
        "final_energy": record.final_energy,
        "msg_evals": record.totals.msg_evals,
        "node_evals": record.totals.node_evals,
        "score_evals": record.totals.score_evals,
    });
    let echo = json!({ "dynamics": spec.dynamics, "support": support, "master_seed": spec.master_seed, "graph": id });
    write_outputs(a.common.out_dir(), std::slice::from_ref(&record), &echo, Some(&summary))?;
    print_stdout(&serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn ablate(c: &Common) -> Result<()> {
    let mut spec = load_spec(c, ExperimentSpec::default())?;
    if let Some(s) = c.strategy {
        spec.strategies = vec![s];
    }
    let records = run_ablation(&spec)?;
    let sizes = |s: Strategy| -> Vec<f64> {
        records.iter().filter(|r| r.strategy == s.name() && r.is_ok()).map(|r| r.final_size as f64).collect()
    };
    let energies = |s: Strategy| -> Vec<f64> {
        records.iter().filter(|r| r.strategy == s.name() && r.is_ok()).map(|r| r.final_energy).collect()
    };
    let lore = sizes(Strategy::Lore);
    let per_strategy: Vec<Value> = spec
        .strategies
        .iter()
        .map(|&s| {
            let mut row = json!({
                "strategy": s.name(),
                "mean_final_size": mean(&sizes(s)),
                "mean_final_energy": mean(&energies(s)),
            });
            if s != Strategy::Lore && !lore.is_empty() && lore.len() == sizes(s).len() {
                row["lore_sign_test"] = serde_json::to_value(sign_test_greater(&lore, &sizes(s))).unwrap();
            }
            row
        })
        .collect();
    let summary = json!({ "strategies": per_strategy });
    write_outputs(c.out_dir(), &records, &spec, Some(&summary))?;
    print_stdout(&serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn sweep(c: &Common) -> Result<()> {
    let spec = load_spec(c, ExperimentSpec::default_sweep())?;
    let records = run_sweep(&spec)?;
    let budgeted: Vec<&RunRecord> = records.iter().filter(|r| !r.is_reference()).collect();
    let summary = json!({
        "retention_ranges": retention_ranges(&records),
        "overlap_phases": overlap_phases(budgeted.iter().copied(), spec.dynamics.steps),
    });
    write_outputs(c.out_dir(), &records, &spec, Some(&summary))?;
    print_stdout(&serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

fn bound_check(a: &BoundArgs) -> Result<()> {
    let spec = load_spec(&a.common, ExperimentSpec::default())?;
    let graph = load_edge_list(&a.graph)?;
    let report = paired_trajectory_report(&graph, &spec.dynamics, &spec.budget, spec.master_seed)?;
    let text = serde_json::to_string_pretty(&report)?;
    if let Some(dir) = &a.common.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("bound_report.json"), format!("{text}\n"))?;
    }
    print_stdout(&text)?;
    if !report.violated_steps.is_empty() || !report.unrolled_holds {
        log::warn!("bound violated at steps {:?}", report.violated_steps);
    }
    Ok(())
}
