//! Brute-force decomposition of a small regular graph into pieces with large
//! minimum cut, and the checks the pieces must pass.
//!
//! Starting from `H = G`, repeatedly remove the smallest vertex subset `X`
//! (ties broken lexicographically in the unified index space) whose boundary
//! in `H` is at most `2α`, `α = d²/4n`. When no such subset exists the
//! residual `H` becomes the last piece, so the pieces partition `V(G)`.
//! Everything here enumerates vertex subsets and is limited to 24 vertices.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{BipartiteMultigraph, InducedSubgraph, Side, VertexSet};

/// Vertex limit of every subset scan in this module.
pub const MAX_VERTICES: usize = 24;

pub type Rational = Ratio<u64>;

/// `d² / 4n`, exact.
pub fn alpha(n: usize, d: usize) -> Rational {
    assert!(n >= 1 && d >= 1, "alpha needs n, d >= 1");
    Ratio::new((d * d) as u64, 4 * n as u64)
}

/// Cut evaluation over bitmask vertex sets (unified indices).
///
/// `levels[x][k]` holds the neighbours joined to `x` by more than `k`
/// parallel edges, so a cut is a sum of popcounts.
#[derive(Debug, Clone)]
pub(crate) struct MaskGraph {
    n: usize,
    levels: Vec<Vec<u64>>,
}

impl MaskGraph {
    pub(crate) fn new(g: &BipartiteMultigraph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 64);
        let nl = g.n_left();
        let mut mult = vec![vec![0u32; n]; n];
        for (u, v) in g.edges() {
            mult[u][nl + v] += 1;
            mult[nl + v][u] += 1;
        }
        let levels = mult
            .iter()
            .map(|row| {
                let top = row.iter().copied().max().unwrap_or(0);
                (0..top)
                    .map(|k| {
                        row.iter()
                            .enumerate()
                            .filter(|&(_, &c)| c > k)
                            .fold(0u64, |m, (y, _)| m | 1 << y)
                    })
                    .collect()
            })
            .collect();
        Self { n, levels }
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.n
    }

    pub(crate) fn cut(&self, mask: u64) -> usize {
        let mut total = 0;
        let mut bits = mask;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for level in &self.levels[x] {
                total += (level & !mask).count_ones() as usize;
            }
        }
        total
    }
}

fn check_vertices(g: &BipartiteMultigraph) -> Result<()> {
    if g.vertex_count() > MAX_VERTICES {
        return Err(Error::TooLarge {
            what: "vertex count",
            actual: g.vertex_count(),
            limit: MAX_VERTICES,
        });
    }
    Ok(())
}

/// Smallest proper nonempty vertex subset with boundary at most `threshold`,
/// lexicographically first among those of that size.
pub fn smallest_low_cut_subset(h: &BipartiteMultigraph, threshold: Rational) -> Result<Option<VertexSet>> {
    check_vertices(h)?;
    let mg = MaskGraph::new(h);
    let n = mg.vertex_count();
    for k in 1..n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mask = combo.iter().fold(0u64, |m, &i| m | 1 << i);
            if Rational::from_integer(mg.cut(mask) as u64) <= threshold {
                return Ok(Some(VertexSet::from_mask(h.n_left(), h.n_right(), mask)));
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

/// Minimum cut over all proper nonempty vertex subsets.
pub fn brute_force_min_cut(g: &BipartiteMultigraph) -> Result<usize> {
    check_vertices(g)?;
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::Parameter("minimum cut needs at least two vertices".into()));
    }
    let mg = MaskGraph::new(g);
    // every cut has a side avoiding the last vertex
    Ok((1u64..1 << (n - 1)).map(|mask| mg.cut(mask)).min().expect("n >= 2"))
}

#[derive(Debug, Clone)]
pub struct Piece {
    /// Vertex set `X_i` in the host graph's indices.
    pub vertices: VertexSet,
    /// `G_i`, the subgraph induced by `X_i`.
    pub subgraph: InducedSubgraph,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    /// Pieces in extraction order; the residual is last.
    pub pieces: Vec<Piece>,
    /// `M_i = |δ_{H_i}(X_i)|` for every extracted piece.
    pub boundary_counts: Vec<usize>,
    pub alpha: Rational,
    pub degree: usize,
    /// Whether the last piece is the residual graph rather than an extraction.
    pub residual_is_piece: bool,
}

impl DecompositionResult {
    pub fn threshold(&self) -> Rational {
        self.alpha * 2
    }
}

/// Runs the decomposition on a regular graph with at most 24 vertices.
pub fn decompose(g: &BipartiteMultigraph) -> Result<DecompositionResult> {
    check_vertices(g)?;
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !g.is_square() || d == 0 {
        return Err(Error::NotRegular);
    }
    let alpha = alpha(g.n_left(), d);
    let threshold = alpha * 2;
    let mut remaining = VertexSet::full(g.n_left(), g.n_right());
    let mut pieces = Vec::new();
    let mut boundary_counts = Vec::new();
    loop {
        let h = g.induced_subgraph(&remaining);
        let Some(local) = smallest_low_cut_subset(&h.graph, threshold)? else {
            pieces.push(Piece {
                vertices: remaining,
                subgraph: h,
            });
            break;
        };
        boundary_counts.push(h.graph.cut_size(&local));
        let mut x = VertexSet::empty(g.n_left(), g.n_right());
        for u in local.indices(Side::Left) {
            x.insert(Side::Left, h.left_map[u]);
        }
        for v in local.indices(Side::Right) {
            x.insert(Side::Right, h.right_map[v]);
        }
        for u in x.indices(Side::Left) {
            remaining.remove(Side::Left, u);
        }
        for v in x.indices(Side::Right) {
            remaining.remove(Side::Right, v);
        }
        pieces.push(Piece {
            subgraph: g.induced_subgraph(&x),
            vertices: x,
        });
    }
    Ok(DecompositionResult {
        pieces,
        boundary_counts,
        alpha,
        degree: d,
        residual_is_piece: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Piece minimum cut not strictly above `α`.
    MinCut { piece: usize, min_cut: usize },
    /// `|δ_G(X_i)| > d/2`.
    Boundary { piece: usize, boundary: usize },
    /// `Σ M_i > d/2`.
    BoundarySum { sum: usize },
    /// More than `n/d` pieces.
    PieceCount { pieces: usize },
    /// Recorded `M_i` differs from the replayed cut, or exceeds `2α`.
    RecordedBoundary { piece: usize, recorded: usize, replayed: usize },
    /// Piece vertex sets do not partition `V(G)`.
    NotPartition,
    /// Piece too small to have a cut.
    Degenerate { piece: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceCheck {
    pub min_cut: Option<usize>,
    pub boundary: usize,
}

#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub pieces: Vec<PieceCheck>,
    pub boundary_sum: usize,
    pub violations: Vec<Violation>,
}

impl DecompositionReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every piece of `r` against `g`: piece minimum cut `> α`, piece
/// boundary in `G` at most `d/2`, `Σ M_i ≤ d/2`, at most `n/d` pieces, the
/// recorded `M_i`, and that the pieces partition the vertex set.
pub fn verify_decomposition(g: &BipartiteMultigraph, r: &DecompositionResult) -> Result<DecompositionReport> {
    let d = r.degree;
    let n = g.n_left();
    let mut violations = Vec::new();
    let mut checks = Vec::new();

    let mut covered = vec![0usize; g.vertex_count()];
    for p in &r.pieces {
        for x in p.vertices.unified_indices() {
            covered[x] += 1;
        }
    }
    if covered.iter().any(|&c| c != 1) {
        violations.push(Violation::NotPartition);
    }

    for (i, p) in r.pieces.iter().enumerate() {
        let boundary = g.cut_size(&p.vertices);
        let min_cut = if p.subgraph.graph.vertex_count() >= 2 {
            Some(brute_force_min_cut(&p.subgraph.graph)?)
        } else {
            violations.push(Violation::Degenerate { piece: i });
            None
        };
        if let Some(c) = min_cut {
            if Rational::from_integer(c as u64) <= r.alpha {
                violations.push(Violation::MinCut { piece: i, min_cut: c });
            }
        }
        if 2 * boundary > d {
            violations.push(Violation::Boundary { piece: i, boundary });
        }
        checks.push(PieceCheck { min_cut, boundary });
    }

    let boundary_sum: usize = r.boundary_counts.iter().sum();
    if 2 * boundary_sum > d {
        violations.push(Violation::BoundarySum { sum: boundary_sum });
    }
    if r.pieces.len() * d > n {
        violations.push(Violation::PieceCount { pieces: r.pieces.len() });
    }

    let mut remaining = VertexSet::full(g.n_left(), g.n_right());
    for (i, &recorded) in r.boundary_counts.iter().enumerate() {
        let Some(p) = r.pieces.get(i) else {
            violations.push(Violation::NotPartition);
            break;
        };
        let replayed = g
            .edges()
            .filter(|&(u, v)| remaining.contains(Side::Left, u) && remaining.contains(Side::Right, v))
            .filter(|&(u, v)| p.vertices.contains(Side::Left, u) != p.vertices.contains(Side::Right, v))
            .count();
        if replayed != recorded || Rational::from_integer(recorded as u64) > r.threshold() {
            violations.push(Violation::RecordedBoundary { piece: i, recorded, replayed });
        }
        for u in p.vertices.indices(Side::Left) {
            remaining.remove(Side::Left, u);
        }
        for v in p.vertices.indices(Side::Right) {
            remaining.remove(Side::Right, v);
        }
    }

    Ok(DecompositionReport {
        pieces: checks,
        boundary_sum,
        violations,
    })
}
