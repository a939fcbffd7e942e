//! Maximum and perfect matching: Hopcroft-Karp, an exhaustive oracle, Euler
//! splitting for power-of-two degrees, and the sampling driver for regular
//! graphs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{BipartiteMultigraph, EdgeId, Matching, Side};
use crate::rng::derive_seed;
use crate::sampler::{rate_schedule, sample_edges, upper_bound_rate, SamplingConfig};

const NONE: u32 = u32::MAX;
const INF: u32 = u32::MAX;

/// Outcome of [`find_perfect_matching`].
#[derive(Debug, Clone)]
pub struct MatchResult {
    pub matching: Matching,
    pub is_perfect: bool,
    /// Hopcroft-Karp phases of the final run (0 when Euler splitting was used).
    pub phases: usize,
    /// Edge count of the sample the matching was found in.
    pub sampled_edges: Option<usize>,
    /// Number of samples drawn.
    pub attempts: usize,
}

/// Maximum-cardinality matching by Hopcroft-Karp.
pub fn hopcroft_karp(g: &BipartiteMultigraph) -> Matching {
    hopcroft_karp_with_phases(g).0
}

/// Hopcroft-Karp, also returning the number of augmenting phases.
///
/// Each phase builds BFS layers from the free left vertices up to the first
/// layer that reaches a free right vertex, then augments along a maximal set
/// of vertex-disjoint shortest paths found by layered DFS. Adjacency is
/// scanned in stored edge order.
pub fn hopcroft_karp_with_phases(g: &BipartiteMultigraph) -> (Matching, usize) {
    let (nl, nr) = (g.n_left(), g.n_right());
    let mut mate_l = vec![NONE; nl];
    let mut mate_r = vec![NONE; nr];
    let mut dist = vec![INF; nl];
    let mut cursor = vec![0usize; nl];
    let mut queue = VecDeque::with_capacity(nl);
    let mut stack: Vec<u32> = Vec::new();
    let mut phases = 0;

    loop {
        // BFS layering
        queue.clear();
        for u in 0..nl {
            if mate_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u as u32);
            } else {
                dist[u] = INF;
            }
        }
        let mut limit = INF;
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du >= limit {
                continue;
            }
            for &v in g.neighbors(Side::Left, u as usize) {
                let w = mate_r[v as usize];
                if w == NONE {
                    limit = limit.min(du + 1);
                } else if dist[w as usize] == INF {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        if limit == INF {
            break;
        }
        phases += 1;

        // layered DFS from every free left vertex
        cursor.iter_mut().for_each(|c| *c = 0);
        for root in 0..nl {
            if mate_l[root] != NONE || dist[root] != 0 {
                continue;
            }
            stack.clear();
            stack.push(root as u32);
            while let Some(&u) = stack.last() {
                let u = u as usize;
                let nbrs = g.neighbors(Side::Left, u);
                if cursor[u] == nbrs.len() {
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = nbrs[cursor[u]];
                cursor[u] += 1;
                let w = mate_r[v as usize];
                if w == NONE {
                    if dist[u] + 1 != limit {
                        continue;
                    }
                    let mut free = v;
                    for &x in stack.iter().rev() {
                        let prev = mate_l[x as usize];
                        mate_l[x as usize] = free;
                        mate_r[free as usize] = x;
                        free = prev;
                        dist[x as usize] = INF;
                    }
                    break;
                } else if dist[u] + 1 < limit && dist[w as usize] == dist[u] + 1 {
                    stack.push(w);
                }
            }
        }
    }

    let to_opt = |m: Vec<u32>| m.into_iter().map(|x| (x != NONE).then_some(x as usize)).collect();
    (Matching::from_partner_maps(to_opt(mate_l), to_opt(mate_r)), phases)
}

/// Largest left side accepted by [`brute_force_max_matching`].
pub const BRUTE_FORCE_MAX_LEFT: usize = 12;

/// Maximum matching by exhaustive search over left-vertex assignments.
pub fn brute_force_max_matching(g: &BipartiteMultigraph) -> Result<Matching> {
    let nl = g.n_left();
    if nl > BRUTE_FORCE_MAX_LEFT {
        return Err(Error::TooLarge {
            what: "left side",
            actual: nl,
            limit: BRUTE_FORCE_MAX_LEFT,
        });
    }
    let nbrs: Vec<Vec<usize>> = (0..nl)
        .map(|u| {
            let mut n: Vec<usize> = g.neighbors(Side::Left, u).iter().map(|&v| v as usize).collect();
            n.sort_unstable();
            n.dedup();
            n
        })
        .collect();

    struct Search<'a> {
        nbrs: &'a [Vec<usize>],
        used: Vec<bool>,
        current: Vec<Option<usize>>,
        best: Vec<Option<usize>>,
        best_size: usize,
    }

    impl Search<'_> {
        fn run(&mut self, u: usize, size: usize) {
            if u == self.nbrs.len() {
                if size > self.best_size {
                    self.best_size = size;
                    self.best.clone_from(&self.current);
                }
                return;
            }
            if size + (self.nbrs.len() - u) <= self.best_size {
                return;
            }
            for i in 0..self.nbrs[u].len() {
                let v = self.nbrs[u][i];
                if !self.used[v] {
                    self.used[v] = true;
                    self.current[u] = Some(v);
                    self.run(u + 1, size + 1);
                    self.current[u] = None;
                    self.used[v] = false;
                }
            }
            self.run(u + 1, size);
        }
    }

    let mut search = Search {
        nbrs: &nbrs,
        used: vec![false; g.n_right()],
        current: vec![None; nl],
        best: vec![None; nl],
        best_size: 0,
    };
    search.run(0, 0);
    let pairs: Vec<(usize, usize)> = search
        .best
        .iter()
        .enumerate()
        .filter_map(|(u, v)| v.map(|v| (u, v)))
        .collect();
    Matching::from_pairs(nl, g.n_right(), &pairs)
}

/// Perfect matching of a regular graph whose degree is a power of two.
///
/// Each round orients every component along closed trails, walked from the
/// lowest-indexed vertex with unused edges, and keeps the edges traversed
/// from left to right. That halves the degree; at degree 1 the remaining
/// edges are the matching. Rounds work in place on per-vertex adjacency
/// slots, so the whole run touches `O(m)` memory.
pub fn euler_split_matching(g: &BipartiteMultigraph) -> Result<Matching> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !d.is_power_of_two() {
        return Err(Error::Parameter(format!("degree {d} is not a power of two")));
    }
    if g.edge_count() >= TwinSlots::INDEX_MASK as usize {
        return Err(Error::TooLarge {
            what: "edge count",
            actual: g.edge_count(),
            limit: TwinSlots::INDEX_MASK as usize,
        });
    }
    let mut split = TwinSlots::new(g, d);
    while split.deg > 1 {
        split.round();
    }
    let pairs: Vec<(usize, usize)> = (0..g.n_left()).map(|u| (u, split.nbr(split.left[u * d]))).collect();
    Matching::from_pairs(g.n_left(), g.n_right(), &pairs)
}

/// Adjacency of a regular graph with power-of-two stride `d`: vertex `x`
/// owns slots `x·d .. x·d + deg`. Each slot holds the index of the same edge
/// in the other side's array, plus two flag bits, so the neighbour is just
/// that index divided by `d`. Walking an edge touches only the blocks of its
/// two endpoints.
struct TwinSlots {
    d: usize,
    shift: u32,
    deg: usize,
    left: Vec<u32>,
    right: Vec<u32>,
}

impl TwinSlots {
    const USED: u32 = 1 << 31;
    const KEPT: u32 = 1 << 30;
    const INDEX_MASK: u32 = Self::KEPT - 1;

    fn new(g: &BipartiteMultigraph, d: usize) -> Self {
        let mut left = vec![0u32; g.n_left() * d];
        let mut right = vec![0u32; g.n_right() * d];
        let (mut fill_l, mut fill_r) = (vec![0usize; g.n_left()], vec![0usize; g.n_right()]);
        for &(u, v) in g.packed_edges() {
            let (u, v) = (u as usize, v as usize);
            let (ls, rs) = (u * d + fill_l[u], v * d + fill_r[v]);
            fill_l[u] += 1;
            fill_r[v] += 1;
            left[ls] = rs as u32;
            right[rs] = ls as u32;
        }
        Self { d, shift: d.trailing_zeros(), deg: d, left, right }
    }

    fn nbr(&self, slot: u32) -> usize {
        ((slot & Self::INDEX_MASK) >> self.shift) as usize
    }

    fn round(&mut self) {
        let (d, deg, shift) = (self.d, self.deg, self.shift);
        let mut cursor_l = vec![0usize; self.left.len() / d];
        let mut cursor_r = vec![0usize; self.right.len() / d];
        for start in 0..cursor_l.len() {
            let (mut on_left, mut x) = (true, start);
            loop {
                let (here, there, cursor) = if on_left {
                    (&mut self.left, &mut self.right, &mut cursor_l[x])
                } else {
                    (&mut self.right, &mut self.left, &mut cursor_r[x])
                };
                let base = x * d;
                while *cursor < deg && here[base + *cursor] & Self::USED != 0 {
                    *cursor += 1;
                }
                if *cursor == deg {
                    break;
                }
                let flags = if on_left { Self::USED | Self::KEPT } else { Self::USED };
                let twin = here[base + *cursor] & Self::INDEX_MASK;
                here[base + *cursor] |= flags;
                there[twin as usize] |= flags;
                (on_left, x) = (!on_left, (twin >> shift) as usize);
            }
        }
        // Keep the KEPT slots, moving them to the front of each block. The
        // left pass re-points right twins at the new left positions; the
        // right pass then does the same for the left twins.
        for left_first in [true, false] {
            let (here, there) = if left_first {
                (&mut self.left, &mut self.right)
            } else {
                (&mut self.right, &mut self.left)
            };
            for base in (0..here.len()).step_by(d) {
                let mut w = base;
                for i in base..base + deg {
                    let slot = here[i];
                    if slot & Self::KEPT != 0 {
                        let twin = (slot & Self::INDEX_MASK) as usize;
                        // clear the flags only once both sides have moved
                        let flags = if left_first { there[twin] & !Self::INDEX_MASK } else { 0 };
                        there[twin] = w as u32 | flags;
                        here[w] = if left_first { slot } else { slot & Self::INDEX_MASK };
                        w += 1;
                    }
                }
            }
        }
        self.deg /= 2;
    }
}

/// Ids of the edges traversed left-to-right when every component is split
/// into closed trails. Requires every degree to be even; the result is
/// then exactly half of every vertex's edges.
pub fn euler_split_round(g: &BipartiteMultigraph) -> Vec<EdgeId> {
    let mut used = vec![false; g.edge_count()];
    let mut cursor_l = vec![0usize; g.n_left()];
    let mut cursor_r = vec![0usize; g.n_right()];
    let mut kept = vec![false; g.edge_count()];
    for start in 0..g.n_left() {
        let (mut side, mut x) = (Side::Left, start);
        loop {
            let (cursor, incident) = match side {
                Side::Left => (&mut cursor_l[x], g.incident(Side::Left, x)),
                Side::Right => (&mut cursor_r[x], g.incident(Side::Right, x)),
            };
            while *cursor < incident.len() && used[incident[*cursor] as usize] {
                *cursor += 1;
            }
            if *cursor == incident.len() {
                // stuck: only possible back at `start`
                debug_assert!(side == Side::Left && x == start);
                break;
            }
            let e = incident[*cursor] as usize;
            used[e] = true;
            let (u, v) = g.edge(e);
            match side {
                Side::Left => {
                    kept[e] = true;
                    (side, x) = (Side::Right, v);
                }
                Side::Right => (side, x) = (Side::Left, u),
            }
        }
    }
    (0..kept.len()).filter(|&e| kept[e]).collect()
}

/// Perfect matching of a `d`-regular graph.
///
/// Power-of-two degrees go to [`euler_split_matching`]. Otherwise edges are
/// sampled at `p0 = min(1, c·n·ln n / d²)`, doubling the rate after every
/// sample without a perfect matching; the schedule ends at `p = 1`, where
/// Hopcroft-Karp on the full graph always succeeds.
pub fn find_perfect_matching(g: &BipartiteMultigraph, c: f64, seed: u64) -> Result<MatchResult> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Parameter(format!("rate constant c={c} must be positive")));
    }
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_left: g.n_left(),
            n_right: g.n_right(),
        });
    }
    let n = g.n_left();
    if d.is_power_of_two() {
        let matching = euler_split_matching(g)?;
        return Ok(MatchResult {
            is_perfect: matching.size() == n,
            matching,
            phases: 0,
            sampled_edges: None,
            attempts: 0,
        });
    }
    let p0 = if n >= 2 { upper_bound_rate(n, d, c) } else { 1.0 };
    if p0 >= 1.0 {
        let (matching, phases) = hopcroft_karp_with_phases(g);
        return Ok(MatchResult {
            is_perfect: matching.size() == n,
            matching,
            phases,
            sampled_edges: None,
            attempts: 0,
        });
    }
    match_by_sampling(g, p0, seed)
}

/// Sampling loop of [`find_perfect_matching`] starting at rate `p0`, without
/// the power-of-two shortcut. Attempt `i` samples with seed
/// `derive_seed(seed, [i])`.
pub fn match_by_sampling(g: &BipartiteMultigraph, p0: f64, seed: u64) -> Result<MatchResult> {
    let n = g.n_left();
    let mut last = None;
    for (i, p) in rate_schedule(p0)?.enumerate() {
        let cfg = SamplingConfig::new(p, derive_seed(seed, &[i as u64]))?;
        let sample = sample_edges(g, &cfg);
        let (matching, phases) = hopcroft_karp_with_phases(&sample.graph);
        let result = MatchResult {
            is_perfect: g.is_square() && matching.size() == n,
            matching,
            phases,
            sampled_edges: Some(sample.kept()),
            attempts: i + 1,
        };
        if result.is_perfect {
            return Ok(result);
        }
        last = Some(result);
    }
    // the schedule always yields at least p0
    last.ok_or(Error::NoPerfectMatching)
}
