//! Uniform Bernoulli edge sampling and the sampling-rate schedule.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{BipartiteMultigraph, EdgeId};
use crate::rng::{seeded_rng, Rng};

/// Per-edge keep probability plus the seed of the sampling stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    p: f64,
    seed: u64,
}

impl SamplingConfig {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("sampling probability {p} outside [0, 1]")));
        }
        Ok(Self { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Sampled subgraph on the host's vertex set.
#[derive(Debug, Clone)]
pub struct SampledGraph {
    pub graph: BipartiteMultigraph,
    /// Host edge id of each sampled edge, ascending.
    pub origin: Vec<EdgeId>,
}

impl SampledGraph {
    pub fn kept(&self) -> usize {
        self.origin.len()
    }
}

/// Keeps each edge of `g` independently with probability `cfg.p()`.
///
/// Kept edges are located by geometric skips over the edge list, so rejected
/// edges are never visited.
pub fn sample_edges(g: &BipartiteMultigraph, cfg: &SamplingConfig) -> SampledGraph {
    let mut rng = seeded_rng(cfg.seed);
    let ids = sample_indices(g.edge_count(), cfg.p, &mut rng);
    let (graph, origin) = g.edge_subgraph(ids);
    SampledGraph { graph, origin }
}

/// Bernoulli(p) subset of `0..m` via geometric gaps, ascending.
pub fn sample_indices(m: usize, p: f64, rng: &mut Rng) -> Vec<usize> {
    if p >= 1.0 {
        return (0..m).collect();
    }
    if p <= 0.0 || m == 0 {
        return Vec::new();
    }
    let log_q = (-p).ln_1p();
    let mut out = Vec::with_capacity(((m as f64) * p * 1.1) as usize + 8);
    let mut i = 0usize;
    loop {
        // uniform in (0, 1]
        let u = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (m - i) as f64 {
            break;
        }
        i += skip as usize;
        out.push(i);
        i += 1;
        if i >= m {
            break;
        }
    }
    out
}

/// `min(1, c·n·ln n / d²)`.
pub fn upper_bound_rate(n: usize, d: usize, c: f64) -> f64 {
    debug_assert!(n >= 2 && d >= 1 && c > 0.0);
    let n = n as f64;
    let d = d as f64;
    (c * n * n.ln() / (d * d)).min(1.0)
}

/// Doubling rates `p0, 2p0, 4p0, …` clamped at 1; ends after yielding 1.
#[derive(Debug, Clone)]
pub struct RateSchedule {
    next: Option<f64>,
}

pub fn rate_schedule(p0: f64) -> Result<RateSchedule> {
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::Parameter(format!("initial rate {p0} outside (0, 1]")));
    }
    Ok(RateSchedule { next: Some(p0) })
}

impl Iterator for RateSchedule {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let p = self.next?;
        self.next = (p < 1.0).then(|| (2.0 * p).min(1.0));
        Some(p)
    }
}
