//! Graph families: random regular graphs, deficient `H^(k)` blocks, the
//! chained lower-bound family, and disjoint unions.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{BipartiteMultigraph, Side};
use crate::rng::{derive_seed, seeded_rng};

/// `d`-regular bipartite multigraph on `n + n` vertices: the edge union of
/// `d` independent uniform permutations of `0..n`.
///
/// Edge `t·n + u` joins `u` to `π_t(u)`. Parallel edges are kept.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<BipartiteMultigraph> {
    if d == 0 || d > n {
        return Err(Error::Parameter(format!("need 1 <= d <= n, got n={n}, d={d}")));
    }
    let mut rng = seeded_rng(seed);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut edges = Vec::with_capacity(n * d);
    for _ in 0..d {
        perm.shuffle(&mut rng);
        edges.extend(perm.iter().enumerate().map(|(u, &v)| (u as u32, v)));
    }
    Ok(BipartiteMultigraph::from_packed(n, n, edges))
}

/// Simple `d`-regular bipartite graph on `n + n` vertices.
///
/// Permutations are drawn one at a time and redrawn until they avoid every
/// earlier edge. For `2d > n` the complement of a simple `(n − d)`-regular
/// graph is returned instead. Meant for small `n`; gives up after a fixed
/// number of redraws.
pub fn random_regular_simple(n: usize, d: usize, seed: u64) -> Result<BipartiteMultigraph> {
    const MAX_REDRAWS: usize = 100_000;
    if d == 0 || d > n {
        return Err(Error::Parameter(format!("need 1 <= d <= n, got n={n}, d={d}")));
    }
    let (k, complement) = if 2 * d > n { (n - d, true) } else { (d, false) };
    let mut rng = seeded_rng(derive_seed(seed, &[0x51]));
    let mut used = vec![false; n * n];
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..k {
        let mut redraws = 0;
        loop {
            perm.shuffle(&mut rng);
            if perm.iter().enumerate().all(|(u, &v)| !used[u * n + v]) {
                break;
            }
            redraws += 1;
            if redraws == MAX_REDRAWS {
                return Err(Error::Parameter(format!(
                    "no simple {d}-regular graph found on {n}+{n} vertices"
                )));
            }
        }
        for (u, &v) in perm.iter().enumerate() {
            used[u * n + v] = true;
        }
    }
    let edges = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| used[u * n + v] != complement)
        .map(|(u, v)| (u as u32, v as u32))
        .collect();
    Ok(BipartiteMultigraph::from_packed(n, n, edges))
}

/// `H^(k)` block with its deficient vertices.
#[derive(Debug, Clone)]
pub struct HBlock {
    pub graph: BipartiteMultigraph,
    pub deficient_left: Vec<usize>,
    pub deficient_right: Vec<usize>,
}

/// `H^(k)`: the circulant `u_i ~ v_{(i+t) mod d}`, `t = 0..d`, with the
/// `t = 0` edges of `u_0..u_{k-1}` removed. Those `k` vertices on each side
/// have degree `d − 1`; the rest have degree `d`.
pub fn h_block(d: usize, k: usize) -> Result<HBlock> {
    if k > d {
        return Err(Error::Parameter(format!("deficiency k={k} exceeds degree d={d}")));
    }
    let edges = circulant_minus_matching(d, k).collect();
    Ok(HBlock {
        graph: BipartiteMultigraph::from_packed(d, d, edges),
        deficient_left: (0..k).collect(),
        deficient_right: (0..k).collect(),
    })
}

fn circulant_minus_matching(d: usize, k: usize) -> impl Iterator<Item = (u32, u32)> {
    (0..d).flat_map(move |i| {
        (0..d)
            .filter(move |&t| !(t == 0 && i < k))
            .map(move |t| (i as u32, ((i + t) % d) as u32))
    })
}

/// Parameters and vertex layout of a lower-bound family member.
///
/// Block `(i, j)` (chain position `i`, chain `j`, both 0-based) occupies left
/// and right indices `block_offsets[i·W + j] .. + d`. The distinguished
/// vertex `u` is the last right vertex, `v` the last left vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundMeta {
    pub n: usize,
    pub d: usize,
    pub gamma: usize,
    pub w_blocks: usize,
    pub k_list: Vec<usize>,
    pub chain_len: usize,
    /// `d ≥ √(n / ln n)`: `K = ⌈ln n⌉` rather than `⌈n/d²⌉`.
    pub dense_regime: bool,
    pub u_index: usize,
    pub v_index: usize,
    pub block_offsets: Vec<usize>,
}

impl LowerBoundMeta {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 2 || d == 0 {
            return Err(Error::Parameter(format!("need n >= 2 and d >= 1, got n={n}, d={d}")));
        }
        let ln_n = (n as f64).ln();
        let d2 = (d * d) as f64;
        let gamma = (d2 * ln_n / n as f64).ceil() as usize;
        let w_blocks = d.div_ceil(gamma);
        let mut k_list = vec![gamma; w_blocks - 1];
        k_list.push(d - gamma * (w_blocks - 1));
        let dense_regime = d2 * ln_n >= n as f64;
        let chain_len = if dense_regime {
            ln_n.ceil() as usize
        } else {
            n.div_ceil(d * d)
        };
        let blocks = chain_len * w_blocks;
        let side = d * blocks;
        Ok(Self {
            n,
            d,
            gamma,
            w_blocks,
            k_list,
            chain_len,
            dense_regime,
            u_index: side,
            v_index: side,
            block_offsets: (0..blocks).map(|b| b * d).collect(),
        })
    }

    pub fn side_size(&self) -> usize {
        self.d * self.chain_len * self.w_blocks + 1
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.side_size()
    }

    pub fn block_offset(&self, i: usize, j: usize) -> usize {
        self.block_offsets[i * self.w_blocks + j]
    }

    /// Union bound `W·(p·max_j k_j)^(K+1)` on the probability that a sample
    /// at rate `p` has a perfect matching.
    pub fn survival_bound(&self, p: f64) -> f64 {
        let kmax = *self.k_list.iter().max().expect("W >= 1") as f64;
        self.w_blocks as f64 * (p * kmax).powi(self.chain_len as i32 + 1)
    }

    /// Exact probability that some chain keeps at least one edge between
    /// every pair of consecutive links, a necessary condition for survival.
    pub fn chain_survival_probability(&self, p: f64) -> f64 {
        let fail_all = self.k_list.iter().fold(1.0, |acc, &k| {
            let link = 1.0 - (1.0 - p).powi(k as i32);
            acc * (1.0 - link.powi(self.chain_len as i32 + 1))
        });
        1.0 - fail_all
    }
}

/// Lower-bound family member `G_n` for degree `d`: `K·W` copies of `H^(k_j)`
/// chained through their deficient vertices between the distinguished
/// vertices `u` and `v`.
///
/// Block-internal edges come first in block order, then the chain edges,
/// then the edges at `u` and at `v`.
pub fn lower_bound_family(n: usize, d: usize) -> Result<(BipartiteMultigraph, LowerBoundMeta)> {
    let meta = LowerBoundMeta::new(n, d)?;
    let side = meta.side_size();
    let mut edges = Vec::with_capacity(side * d);
    for i in 0..meta.chain_len {
        for (j, &k) in meta.k_list.iter().enumerate() {
            let off = meta.block_offset(i, j) as u32;
            edges.extend(circulant_minus_matching(d, k).map(|(u, v)| (u + off, v + off)));
        }
    }
    // deficient V side of (i, j) to deficient U side of (i+1, j), index order
    for i in 0..meta.chain_len - 1 {
        for (j, &k) in meta.k_list.iter().enumerate() {
            let here = meta.block_offset(i, j);
            let next = meta.block_offset(i + 1, j);
            edges.extend((0..k).map(|t| ((next + t) as u32, (here + t) as u32)));
        }
    }
    for (j, &k) in meta.k_list.iter().enumerate() {
        let first = meta.block_offset(0, j);
        edges.extend((0..k).map(|t| ((first + t) as u32, meta.u_index as u32)));
    }
    for (j, &k) in meta.k_list.iter().enumerate() {
        let last = meta.block_offset(meta.chain_len - 1, j);
        edges.extend((0..k).map(|t| (meta.v_index as u32, (last + t) as u32)));
    }
    Ok((BipartiteMultigraph::from_packed(side, side, edges), meta))
}

/// Vertex-disjoint union; `g2`'s indices are shifted past `g1`'s.
pub fn disjoint_union(g1: &BipartiteMultigraph, g2: &BipartiteMultigraph) -> BipartiteMultigraph {
    let (dl, dr) = (g1.n_left() as u32, g1.n_right() as u32);
    let edges = g1
        .packed_edges()
        .iter()
        .copied()
        .chain(g2.packed_edges().iter().map(|&(u, v)| (u + dl, v + dr)))
        .collect();
    BipartiteMultigraph::from_packed(g1.n_left() + g2.n_left(), g1.n_right() + g2.n_right(), edges)
}

/// Degree census: `(left degrees, right degrees)`.
pub fn degrees(g: &BipartiteMultigraph) -> (Vec<usize>, Vec<usize>) {
    (
        (0..g.n_left()).map(|u| g.degree(Side::Left, u)).collect(),
        (0..g.n_right()).map(|v| g.degree(Side::Right, v)).collect(),
    )
}
