//! Monte Carlo experiments: survival probability of a perfect matching under
//! uniform sampling, the lower-bound family against its analytic bound, cut
//! and witness-set preservation, and wall-clock comparisons.
//!
//! Every trial draws from its own stream, `derive_seed(seed, [stream, …])`,
//! so results do not depend on how trials are scheduled across threads.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{brute_force_min_cut, MaskGraph};
use crate::error::{Error, Result};
use crate::generators::{disjoint_union, lower_bound_family, random_regular};
use crate::graph::{BipartiteMultigraph, Side};
use crate::matcher::{euler_split_matching, hopcroft_karp, hopcroft_karp_with_phases, match_by_sampling};
use crate::rng::derive_seed;
use crate::sampler::{sample_edges, upper_bound_rate, SamplingConfig};
use crate::witness::{minimal_witness_sets, EdgeBits, HALL_SCAN_MAX_SIDE};

const GRAPH_STREAM: u64 = 1;
const SAMPLE_STREAM: u64 = 2;
const BENCH_STREAM: u64 = 3;

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub family: String,
    pub n: usize,
    pub d: usize,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub survival: f64,
    pub stderr: f64,
    pub analytic_bound: Option<f64>,
    pub wall_ms: Option<f64>,
}

impl ExperimentRecord {
    pub fn from_counts(family: &str, n: usize, d: usize, p: f64, trials: usize, successes: usize) -> Self {
        assert!(trials >= 1 && successes <= trials);
        let survival = successes as f64 / trials as f64;
        Self {
            family: family.to_string(),
            n,
            d,
            p,
            trials,
            successes,
            survival,
            stderr: binomial_stderr(survival, trials),
            analytic_bound: None,
            wall_ms: None,
        }
    }
}

/// `√(s(1−s)/trials)`.
pub fn binomial_stderr(survival: f64, trials: usize) -> f64 {
    (survival * (1.0 - survival) / trials as f64).sqrt()
}

/// Writes records under the header
/// `family,n,d,p,trials,successes,survival,stderr,analytic_bound,wall_ms`.
pub fn write_csv(records: &[ExperimentRecord], writer: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record([
            "family",
            "n",
            "d",
            "p",
            "trials",
            "successes",
            "survival",
            "stderr",
            "analytic_bound",
            "wall_ms",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// [`random_regular`]
    Regular,
    /// Union of two independent random regular graphs.
    TwoComponents,
    /// [`lower_bound_family`]; `n` is the family parameter.
    LowerBound,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Regular => "regular",
            Family::TwoComponents => "two-components",
            Family::LowerBound => "lowerbound",
        }
    }

    /// Builds the family member for `(n, d)`; random families use `seed`.
    pub fn build(self, n: usize, d: usize, seed: u64) -> Result<BipartiteMultigraph> {
        match self {
            Family::Regular => random_regular(n, d, seed),
            Family::TwoComponents => Ok(disjoint_union(
                &random_regular(n, d, derive_seed(seed, &[0]))?,
                &random_regular(n, d, derive_seed(seed, &[1]))?,
            )),
            Family::LowerBound => Ok(lower_bound_family(n, d)?.0),
        }
    }
}

/// Parameter grid of a survival or lower-bound experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub family: Family,
    pub ns: Vec<usize>,
    pub ds: Vec<usize>,
    pub ps: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Keep one graph per `(n, d)` for all `p` and trials, instead of a fresh
    /// graph per trial.
    pub fixed_graph: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() || self.ds.is_empty() || self.ps.is_empty() {
            return Err(Error::Parameter("parameter grids must be non-empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if let Some(p) = self.ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Parameter(format!("sampling probability {p} outside [0, 1]")));
        }
        Ok(())
    }
}

/// True when the sample at rate `p` with this seed has a perfect matching.
pub fn sample_survives(g: &BipartiteMultigraph, p: f64, seed: u64) -> Result<bool> {
    let sample = sample_edges(g, &SamplingConfig::new(p, seed)?);
    Ok(has_perfect_matching(&sample.graph))
}

/// Perfect-matching test with an isolated-vertex shortcut.
pub fn has_perfect_matching(g: &BipartiteMultigraph) -> bool {
    if !g.is_square() {
        return false;
    }
    let isolated = (0..g.n_left()).any(|u| g.degree(Side::Left, u) == 0)
        || (0..g.n_right()).any(|v| g.degree(Side::Right, v) == 0);
    !isolated && hopcroft_karp(g).size() == g.n_left()
}

/// Surviving samples out of `trials` on a fixed graph; trial `t` uses seed
/// `derive_seed(seed, [t])`.
pub fn count_survivals(g: &BipartiteMultigraph, p: f64, trials: usize, seed: u64) -> Result<usize> {
    SamplingConfig::new(p, 0)?;
    Ok((0..trials as u64)
        .into_par_iter()
        .filter(|&t| sample_survives(g, p, derive_seed(seed, &[t])).expect("p validated"))
        .count())
}

/// Survival estimate on one explicit graph for each rate in `ps`.
pub fn run_survival_on_graph(
    g: &BipartiteMultigraph,
    label: &str,
    ps: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<ExperimentRecord>> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let d = g.regular_degree().unwrap_or(0);
    ps.iter()
        .enumerate()
        .map(|(k, &p)| {
            let s = count_survivals(g, p, trials, derive_seed(seed, &[SAMPLE_STREAM, k as u64]))?;
            Ok(ExperimentRecord::from_counts(label, g.n_left(), d, p, trials, s))
        })
        .collect()
}

/// Survival curve over the `(n, d, p)` grid.
pub fn run_survival_curve(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &n in &cfg.ns {
        for &d in &cfg.ds {
            let graph_seed = derive_seed(cfg.seed, &[GRAPH_STREAM, n as u64, d as u64]);
            let fixed = if cfg.fixed_graph {
                Some(cfg.family.build(n, d, graph_seed)?)
            } else {
                // fail early on bad parameters
                cfg.family.build(n, d, graph_seed)?;
                None
            };
            for (k, &p) in cfg.ps.iter().enumerate() {
                let stream = derive_seed(cfg.seed, &[SAMPLE_STREAM, n as u64, d as u64, k as u64]);
                let successes = match &fixed {
                    Some(g) => count_survivals(g, p, cfg.trials, stream)?,
                    None => (0..cfg.trials as u64)
                        .into_par_iter()
                        .map(|t| -> Result<bool> {
                            let g = cfg.family.build(n, d, derive_seed(graph_seed, &[t]))?;
                            sample_survives(&g, p, derive_seed(stream, &[t]))
                        })
                        .collect::<Result<Vec<bool>>>()?
                        .into_iter()
                        .filter(|&b| b)
                        .count(),
                };
                out.push(ExperimentRecord::from_counts(cfg.family.label(), n, d, p, cfg.trials, successes));
            }
        }
    }
    Ok(out)
}

/// Survival on the lower-bound family next to its union bound
/// `W·(p·max_j k_j)^(K+1)`. The family is deterministic; `cfg.family` and
/// `cfg.fixed_graph` are ignored.
pub fn run_lower_bound_check(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for &n in &cfg.ns {
        for &d in &cfg.ds {
            let (g, meta) = lower_bound_family(n, d)?;
            for (k, &p) in cfg.ps.iter().enumerate() {
                let stream = derive_seed(cfg.seed, &[SAMPLE_STREAM, n as u64, d as u64, k as u64]);
                let successes = count_survivals(&g, p, cfg.trials, stream)?;
                let mut r = ExperimentRecord::from_counts(Family::LowerBound.label(), n, d, p, cfg.trials, successes);
                r.analytic_bound = Some(meta.survival_bound(p));
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Result of a bisection for the smallest rate reaching a target survival.
#[derive(Debug, Clone)]
pub struct ThresholdEstimate {
    /// Smallest rate found whose estimated survival reaches the target.
    pub p_star: f64,
    pub survival_at_p_star: f64,
    /// Every `(p, survival)` evaluated, in order.
    pub evaluations: Vec<(f64, f64)>,
}

/// Bisects `(0, hi]` for the smallest rate whose survival estimate over
/// `trials` samples is at least `target`. Returns `None` when `hi` itself
/// misses the target.
pub fn find_survival_threshold(
    g: &BipartiteMultigraph,
    target: f64,
    hi: f64,
    trials: usize,
    iterations: usize,
    seed: u64,
) -> Result<Option<ThresholdEstimate>> {
    let mut evaluations = Vec::new();
    let mut eval = |p: f64, i: u64| -> Result<f64> {
        let s = count_survivals(g, p, trials, derive_seed(seed, &[i]))? as f64 / trials as f64;
        evaluations.push((p, s));
        Ok(s)
    };
    let top = eval(hi, 0)?;
    if top < target {
        return Ok(None);
    }
    let (mut lo, mut hi, mut at_hi) = (0.0, hi, top);
    for i in 1..=iterations as u64 {
        let mid = 0.5 * (lo + hi);
        let s = eval(mid, i)?;
        if s >= target {
            hi = mid;
            at_hi = s;
        } else {
            lo = mid;
        }
    }
    Ok(Some(ThresholdEstimate {
        p_star: hi,
        survival_at_p_star: at_hi,
        evaluations,
    }))
}

#[derive(Debug, Clone, Copy)]
pub struct CutPreservationConfig {
    pub eps: f64,
    pub c: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Largest graph [`run_cut_preservation`] enumerates cuts of.
pub const CUT_PRESERVATION_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct CutPreservationReport {
    pub vertices: usize,
    pub min_cut: usize,
    /// `min(1, c·ln|V| / (κ·ε²))`.
    pub p: f64,
    pub trials: usize,
    /// Distinct cuts checked per trial (complementary sets counted once).
    pub cuts: usize,
    /// Trials in which every cut stayed within `(1 ± ε)·p·|cut|`.
    pub all_cuts_preserved: usize,
    /// Minimal witness sets checked, when the graph is small enough.
    pub witness_sets: Option<usize>,
    /// Trials in which every minimal witness set stayed within `(1 ± ε)·p·|E(A,B)|`.
    pub all_witness_preserved: Option<usize>,
}

impl CutPreservationReport {
    pub fn cut_frequency(&self) -> f64 {
        self.all_cuts_preserved as f64 / self.trials as f64
    }

    pub fn witness_frequency(&self) -> Option<f64> {
        self.all_witness_preserved.map(|s| s as f64 / self.trials as f64)
    }
}

fn within(sampled: usize, full: usize, p: f64, eps: f64) -> bool {
    let expected = p * full as f64;
    (sampled as f64 - expected).abs() <= eps * expected
}

/// Samples at the cut-preserving rate `c·ln|V| / (κ ε²)` and counts the
/// trials in which every cut, and every minimal witness set, keeps a sampled
/// size within a factor `1 ± ε` of its expectation.
pub fn run_cut_preservation(g: &BipartiteMultigraph, cfg: &CutPreservationConfig) -> Result<CutPreservationReport> {
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(Error::Parameter(format!("eps={} outside (0, 1)", cfg.eps)));
    }
    if cfg.c.is_nan() || cfg.c <= 0.0 || cfg.trials == 0 {
        return Err(Error::Parameter("need c > 0 and trials >= 1".into()));
    }
    let nv = g.vertex_count();
    if nv > CUT_PRESERVATION_MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            actual: nv,
            limit: CUT_PRESERVATION_MAX_VERTICES,
        });
    }
    let kappa = brute_force_min_cut(g)?;
    if kappa == 0 {
        return Err(Error::Disconnected);
    }
    let p = (cfg.c * (nv as f64).ln() / (kappa as f64 * cfg.eps * cfg.eps)).min(1.0);

    let full = MaskGraph::new(g);
    let masks = 1u64..1 << (nv - 1);
    let full_cuts: Vec<usize> = masks.clone().map(|m| full.cut(m)).collect();

    let witnesses = if g.n_left().max(g.n_right()) <= HALL_SCAN_MAX_SIDE {
        let sets = minimal_witness_sets(g)?;
        Some(
            sets.iter()
                .map(|w| {
                    let mut bits = EdgeBits::new(g.edge_count());
                    w.edge_ids.iter().for_each(|&e| bits.set(e));
                    bits
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let (cuts_ok, wit_ok) = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let sample = sample_edges(g, &SamplingConfig::new(p, derive_seed(cfg.seed, &[t])).expect("p in [0, 1]"));
            let mg = MaskGraph::new(&sample.graph);
            let cuts = masks
                .clone()
                .zip(&full_cuts)
                .all(|(m, &c)| within(mg.cut(m), c, p, cfg.eps));
            let wits = witnesses.as_ref().is_some_and(|ws| {
                let mut kept = EdgeBits::new(g.edge_count());
                sample.origin.iter().for_each(|&e| kept.set(e));
                ws.iter()
                    .all(|w| within(w.intersection_count(&kept), w.count(), p, cfg.eps))
            });
            (cuts as usize, wits as usize)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    Ok(CutPreservationReport {
        vertices: nv,
        min_cut: kappa,
        p,
        trials: cfg.trials,
        cuts: full_cuts.len(),
        all_cuts_preserved: cuts_ok,
        witness_sets: witnesses.as_ref().map(Vec::len),
        all_witness_preserved: witnesses.map(|_| wit_ok),
    })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub ds: Vec<usize>,
    pub repeats: usize,
    pub c: f64,
    pub seed: u64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        0.5 * (xs[k / 2 - 1] + xs[k / 2])
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Median wall time of Hopcroft-Karp on the full graph (`bench-hk`), the
/// sampling driver (`bench-sampled`), and Euler splitting when `d` is a power
/// of two (`bench-euler`), on one random regular graph per `(n, d)`.
///
/// `successes` counts runs that returned a perfect matching. Wall times make
/// these rows differ between runs.
pub fn run_runtime_bench(cfg: &BenchConfig) -> Result<Vec<ExperimentRecord>> {
    if cfg.ns.is_empty() || cfg.ds.is_empty() || cfg.repeats == 0 || cfg.c.is_nan() || cfg.c <= 0.0 {
        return Err(Error::Parameter("need non-empty grids, repeats >= 1, c > 0".into()));
    }
    let mut out = Vec::new();
    for &n in &cfg.ns {
        for &d in &cfg.ds {
            let g = random_regular(n, d, derive_seed(cfg.seed, &[BENCH_STREAM, n as u64, d as u64]))?;
            let row = |family: &str, p: f64, runs: Vec<(bool, f64)>| {
                let ok = runs.iter().filter(|r| r.0).count();
                let mut r = ExperimentRecord::from_counts(family, n, d, p, runs.len(), ok);
                r.wall_ms = Some(median(runs.into_iter().map(|r| r.1).collect()));
                r
            };

            let hk: Vec<(bool, f64)> = (0..cfg.repeats)
                .map(|_| {
                    let ((m, _), ms) = timed(|| hopcroft_karp_with_phases(&g));
                    (m.size() == n, ms)
                })
                .collect();
            out.push(row("bench-hk", 1.0, hk));

            let p0 = if n >= 2 { upper_bound_rate(n, d, cfg.c) } else { 1.0 };
            let sampled = (0..cfg.repeats)
                .map(|i| {
                    let (r, ms) = timed(|| match_by_sampling(&g, p0, derive_seed(cfg.seed, &[i as u64])));
                    Ok((r?.is_perfect, ms))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(row("bench-sampled", p0, sampled));

            if d.is_power_of_two() {
                let euler = (0..cfg.repeats)
                    .map(|_| {
                        let (m, ms) = timed(|| euler_split_matching(&g));
                        Ok((m?.size() == n, ms))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(row("bench-euler", 1.0, euler));
            }
        }
    }
    Ok(out)
}
