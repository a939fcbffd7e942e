use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use regmatch_core::decomposition::{decompose, verify_decomposition};
use regmatch_core::experiment::{
    run_cut_preservation, run_lower_bound_check, run_runtime_bench, run_survival_curve, write_csv, BenchConfig,
    CutPreservationConfig, ExperimentConfig, Family,
};
use regmatch_core::generators::{h_block, lower_bound_family, LowerBoundMeta};
use regmatch_core::matcher::{brute_force_max_matching, euler_split_matching};
use regmatch_core::witness::verify_witness_cut_injection;
use regmatch_core::{
    find_perfect_matching, hopcroft_karp, read_graph, sample_edges, write_graph, BipartiteMultigraph, Matching,
    SamplingConfig,
};

/// Perfect matchings in regular bipartite graphs by uniform edge sampling.
#[derive(Parser)]
#[command(name = "regmatch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in the text format.
    Generate(GenerateArgs),
    /// Keep each edge independently with probability P.
    Sample(SampleArgs),
    /// Compute a matching and print it.
    Match(MatchArgs),
    /// Split a small regular graph into pieces with large minimum cut.
    Decompose(DecomposeArgs),
    /// Check that distinct minimal witness sets have distinct boundaries.
    VerifyWitness(InputArgs),
    /// Monte Carlo experiments, written as CSV.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFamily {
    /// Union of d random perfect matchings on n+n vertices.
    Regular,
    /// Chained lower-bound construction for parameters n and d.
    Lowerbound,
    /// Circulant d-regular block with k deficient vertices per side.
    HBlock,
    /// Two independent random regular graphs on n+n vertices each.
    TwoComponents,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: GraphFamily,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Deficient vertices per side (h-block only).
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// Required for the random families.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    /// Hopcroft-Karp on the whole graph.
    Hk,
    /// Repeated Euler splitting; d must be a power of two.
    Euler,
    /// Sampling driver; needs --seed.
    Sampled,
    /// Exhaustive search; at most 12 left vertices.
    Brute,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Constant in the sampling rate c·n·ln n / d².
    #[arg(long, default_value_t = 48.0)]
    c: f64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Also check every piece by brute force.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Survival probability of a perfect matching against p.
    Survival(SurvivalArgs),
    /// Survival on the lower-bound family next to its analytic bound.
    Lowerbound(GridArgs),
    /// Cut and witness-set preservation on one small graph.
    Cuts(CutsArgs),
    /// Wall-clock comparison of the matching algorithms.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SurvivalFamily {
    Regular,
    TwoComponents,
    Lowerbound,
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SurvivalArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "regular")]
    family: SurvivalFamily,
    /// Use one graph per (n, d) for every p and trial (default).
    #[arg(long, conflicts_with = "fresh_graph")]
    fixed_graph: bool,
    /// Draw a new graph for every trial.
    #[arg(long)]
    fresh_graph: bool,
}

#[derive(Args)]
struct CutsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 3.0)]
    c: f64,
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, default_value_t = 48.0)]
    c: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Exits with clap's usage status for a flag that is only conditionally required.
fn missing_flag(flag: &str, why: &str) -> ! {
    Cli::command()
        .error(
            clap::error::ErrorKind::MissingRequiredArgument,
            format!("{flag} is required {why}"),
        )
        .exit()
}

fn load(path: &Path) -> Result<BipartiteMultigraph> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_graph(BufReader::new(f)).with_context(|| format!("cannot read graph from {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn save(g: &BipartiteMultigraph, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    write_graph(g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Generate(a) => generate(a)?,
        Command::Sample(a) => {
            let g = load(&a.input)?;
            let s = sample_edges(&g, &SamplingConfig::new(a.p, a.seed)?);
            save(&s.graph, &a.out)?;
        }
        Command::Match(a) => return match_cmd(a),
        Command::Decompose(a) => return decompose_cmd(a),
        Command::VerifyWitness(a) => {
            let report = verify_witness_cut_injection(&load(&a.input)?)?;
            match report.collision {
                None => println!("injection=ok"),
                Some(c) => {
                    println!("injection=collision");
                    println!("first={}", c.first);
                    println!("second={}", c.second);
                    println!("boundary={}", join(&c.boundary));
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Experiment(e) => experiment(e)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(a: GenerateArgs) -> Result<()> {
    let seed = || a.seed.unwrap_or_else(|| missing_flag("--seed", "for random families"));
    let g = match a.family {
        GraphFamily::Regular => Family::Regular.build(a.n, a.d, seed())?,
        GraphFamily::TwoComponents => Family::TwoComponents.build(a.n, a.d, seed())?,
        GraphFamily::HBlock => h_block(a.d, a.k)?.graph,
        GraphFamily::Lowerbound => {
            let (g, meta) = lower_bound_family(a.n, a.d)?;
            let mut side = PathBuf::from(&a.out).into_os_string();
            side.push(".meta");
            let mut w = create(Path::new(&side))?;
            write_meta(&meta, &mut w)?;
            w.flush()?;
            g
        }
    };
    save(&g, &a.out)
}

fn write_meta(m: &LowerBoundMeta, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "n={}", m.n)?;
    writeln!(w, "d={}", m.d)?;
    writeln!(w, "gamma={}", m.gamma)?;
    writeln!(w, "W={}", m.w_blocks)?;
    writeln!(w, "K={}", m.chain_len)?;
    writeln!(w, "k_j={}", join(&m.k_list))?;
    writeln!(w, "regime={}", if m.dense_regime { "dense" } else { "sparse" })?;
    writeln!(w, "side_size={}", m.side_size())?;
    writeln!(w, "u_index={}", m.u_index)?;
    writeln!(w, "v_index={}", m.v_index)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn match_cmd(a: MatchArgs) -> Result<ExitCode> {
    let g = load(&a.input)?;
    let (m, attempts): (Matching, usize) = match a.algo {
        Algo::Hk => (hopcroft_karp(&g), 0),
        Algo::Brute => (brute_force_max_matching(&g)?, 0),
        Algo::Euler => (euler_split_matching(&g)?, 0),
        Algo::Sampled => {
            let seed = a.seed.unwrap_or_else(|| missing_flag("--seed", "for --algo sampled"));
            let r = find_perfect_matching(&g, a.c, seed)?;
            (r.matching, r.attempts)
        }
    };
    let perfect = g.is_square() && m.size() == g.n_left();
    let mut out = BufWriter::new(io::stdout().lock());
    for (u, v) in m.pairs() {
        writeln!(out, "{u} {v}")?;
    }
    writeln!(out, "perfect={perfect} size={} attempts={attempts}", m.size())?;
    out.flush()?;
    Ok(if perfect { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn decompose_cmd(a: DecomposeArgs) -> Result<ExitCode> {
    let g = load(&a.input)?;
    let r = decompose(&g)?;
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "alpha={} threshold={} degree={}", r.alpha, r.threshold(), r.degree)?;
    for (i, p) in r.pieces.iter().enumerate() {
        match r.boundary_counts.get(i) {
            Some(m) => writeln!(out, "piece {i}: {} M={m}", p.vertices)?,
            None => writeln!(out, "piece {i}: {} residual", p.vertices)?,
        }
    }
    let mut sound = true;
    if a.verify {
        let report = verify_decomposition(&g, &r)?;
        for (i, c) in report.pieces.iter().enumerate() {
            let min_cut = c.min_cut.map_or_else(|| "-".to_string(), |k| k.to_string());
            writeln!(out, "check {i}: min_cut={min_cut} boundary={}", c.boundary)?;
        }
        writeln!(out, "boundary_sum={}", report.boundary_sum)?;
        for v in &report.violations {
            writeln!(out, "violation: {v:?}")?;
        }
        writeln!(out, "P1_P2={}", if report.is_sound() { "ok" } else { "violated" })?;
        sound = report.is_sound();
    }
    out.flush()?;
    Ok(if sound { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn experiment(e: ExperimentCommand) -> Result<()> {
    let grid_config = |g: &GridArgs, family: Family, fixed_graph: bool| ExperimentConfig {
        family,
        ns: g.n.clone(),
        ds: g.d.clone(),
        ps: g.p.clone(),
        trials: g.trials,
        seed: g.seed,
        fixed_graph,
    };
    match e {
        ExperimentCommand::Survival(a) => {
            let family = match a.family {
                SurvivalFamily::Regular => Family::Regular,
                SurvivalFamily::TwoComponents => Family::TwoComponents,
                SurvivalFamily::Lowerbound => Family::LowerBound,
            };
            let rows = run_survival_curve(&grid_config(&a.grid, family, !a.fresh_graph))?;
            write_csv(&rows, output(a.grid.out.as_deref())?)?;
        }
        ExperimentCommand::Lowerbound(a) => {
            let rows = run_lower_bound_check(&grid_config(&a, Family::LowerBound, true))?;
            write_csv(&rows, output(a.out.as_deref())?)?;
        }
        ExperimentCommand::Cuts(a) => {
            let g = load(&a.input)?;
            let cfg = CutPreservationConfig {
                eps: a.eps,
                c: a.c,
                trials: a.trials,
                seed: a.seed,
            };
            let r = run_cut_preservation(&g, &cfg).context("decompose the graph first if it is disconnected")?;
            let mut w = output(a.out.as_deref())?;
            writeln!(w, "vertices={} min_cut={} p={} trials={}", r.vertices, r.min_cut, r.p, r.trials)?;
            writeln!(w, "cuts={} all_cuts_preserved={} frequency={}", r.cuts, r.all_cuts_preserved, r.cut_frequency())?;
            match (r.witness_sets, r.all_witness_preserved, r.witness_frequency()) {
                (Some(k), Some(ok), Some(f)) => {
                    writeln!(w, "witness_sets={k} all_witness_preserved={ok} frequency={f}")?
                }
                _ => writeln!(w, "witness_sets=skipped")?,
            }
            w.flush()?;
        }
        ExperimentCommand::Bench(a) => {
            let rows = run_runtime_bench(&BenchConfig {
                ns: a.n,
                ds: a.d,
                repeats: a.repeats,
                c: a.c,
                seed: a.seed,
            })?;
            write_csv(&rows, output(a.out.as_deref())?)?;
        }
    }
    Ok(())
}
