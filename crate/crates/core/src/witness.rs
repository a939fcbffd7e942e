//! Hall's theorem witnesses.
//!
//! A left relevant pair `(A, B)`, `A ⊆ U`, `B ⊆ V`, `|A| > |B|`, has witness
//! edge set `E(A, B)`: the edges from `A` to `V ∖ B`. A right relevant pair
//! (`|A| < |B|`) has the edges from `U ∖ A` to `B`. Right-side routines run
//! the left-side code on the transposed graph.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{BipartiteMultigraph, EdgeId, Matching, Side, VertexSet};
use crate::matcher::hopcroft_karp;

/// Per-side vertex limit of the exhaustive minimality scan.
pub const EXHAUSTIVE_MAX_SIDE: usize = 5;
/// Per-side vertex limit of the Hall-condition minimality scan.
pub const HALL_SCAN_MAX_SIDE: usize = 8;

/// `(A, B)` with `A ⊆ U`, `B ⊆ V`, and `|A| > |B|` (left) or `|A| < |B|` (right).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelevantPair {
    side: Side,
    a: VertexSet,
    b: VertexSet,
}

impl RelevantPair {
    pub fn new(side: Side, a: VertexSet, b: VertexSet) -> Result<Self> {
        if (a.n_left(), a.n_right()) != (b.n_left(), b.n_right()) {
            return Err(Error::Parameter("pair sets have different shapes".into()));
        }
        if a.count(Side::Right) != 0 || b.count(Side::Left) != 0 {
            return Err(Error::Parameter("A must lie in U and B in V".into()));
        }
        let (na, nb) = (a.len(), b.len());
        let relevant = match side {
            Side::Left => na > nb,
            Side::Right => na < nb,
        };
        if !relevant {
            return Err(Error::Parameter(format!(
                "({a}, {b}) is not a {side:?} relevant pair: |A|={na}, |B|={nb}"
            )));
        }
        Ok(Self { side, a, b })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn a(&self) -> &VertexSet {
        &self.a
    }

    pub fn b(&self) -> &VertexSet {
        &self.b
    }

    /// `A ∪ B`, the vertex set whose cut the pair is mapped to.
    pub fn vertex_union(&self) -> VertexSet {
        self.a.union(&self.b)
    }
}

impl fmt::Debug for RelevantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RelevantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "{side}(A={}, B={})", self.a, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEdgeSet {
    pub pair: RelevantPair,
    /// Host edge ids, ascending.
    pub edge_ids: Vec<EdgeId>,
}

/// Edges of `E(A, B)` for the pair's side.
pub fn witness_edge_set(g: &BipartiteMultigraph, pair: &RelevantPair) -> Result<WitnessEdgeSet> {
    if (pair.a.n_left(), pair.a.n_right()) != (g.n_left(), g.n_right()) {
        return Err(Error::Parameter("pair shape does not match graph".into()));
    }
    let edge_ids = g
        .edges()
        .enumerate()
        .filter(|&(_, (u, v))| match pair.side {
            Side::Left => pair.a.contains(Side::Left, u) && !pair.b.contains(Side::Right, v),
            Side::Right => !pair.a.contains(Side::Left, u) && pair.b.contains(Side::Right, v),
        })
        .map(|(id, _)| id)
        .collect();
    Ok(WitnessEdgeSet {
        pair: pair.clone(),
        edge_ids,
    })
}

/// Left set `A` with `|N(A)| < |A|`, certifying that no perfect matching exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallViolator {
    pub a: VertexSet,
    pub neighbors: VertexSet,
}

impl HallViolator {
    pub fn deficiency(&self) -> usize {
        self.a.len() - self.neighbors.len()
    }
}

/// Hall violator read off a maximum matching.
///
/// `A` is every left vertex reachable by alternating paths from the free
/// left vertices and `N(A)` the right vertices reached on the way; all of
/// `N(A)` is matched into `A`, so the deficiency equals the number of free
/// left vertices. Returns `None` when every left vertex is matched, and
/// [`Error::NotMaximum`] when the search meets a free right vertex.
pub fn extract_hall_violator(g: &BipartiteMultigraph, m: &Matching) -> Result<Option<HallViolator>> {
    if !m.is_subgraph_of(g) {
        return Err(Error::InvalidMatching("matching does not belong to the graph".into()));
    }
    let (nl, nr) = (g.n_left(), g.n_right());
    let mut seen_left = vec![false; nl];
    let mut seen_right = vec![false; nr];
    let mut queue: Vec<usize> = (0..nl).filter(|&u| m.left_partner(u).is_none()).collect();
    if queue.is_empty() {
        return Ok(None);
    }
    for &u in &queue {
        seen_left[u] = true;
    }
    while let Some(u) = queue.pop() {
        for &v in g.neighbors(Side::Left, u) {
            let v = v as usize;
            if seen_right[v] {
                continue;
            }
            seen_right[v] = true;
            let w = m.right_partner(v).ok_or(Error::NotMaximum(v))?;
            if !seen_left[w] {
                seen_left[w] = true;
                queue.push(w);
            }
        }
    }
    let pick = |bits: &[bool]| -> Vec<usize> { (0..bits.len()).filter(|&i| bits[i]).collect() };
    Ok(Some(HallViolator {
        a: VertexSet::from_indices(nl, nr, &pick(&seen_left), &[])?,
        neighbors: VertexSet::from_indices(nl, nr, &[], &pick(&seen_right))?,
    }))
}

/// Fixed-width edge bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct EdgeBits(Vec<u64>);

impl EdgeBits {
    pub(crate) fn new(m: usize) -> Self {
        Self(vec![0; m.div_ceil(64).max(1)])
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn is_subset_of(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn intersection_count(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub(crate) fn ids(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for (w, &word) in self.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// Left pair in mask form (bit `i` of `a` is `u_i`, bit `j` of `b` is `v_j`).
#[derive(Debug, Clone)]
struct MaskPair {
    a: u32,
    b: u32,
    witness: EdgeBits,
}

fn left_witness_bits(g: &BipartiteMultigraph, a: u32, b: u32) -> EdgeBits {
    let mut bits = EdgeBits::new(g.edge_count());
    for (id, (u, v)) in g.edges().enumerate() {
        if a >> u & 1 == 1 && b >> v & 1 == 0 {
            bits.set(id);
        }
    }
    bits
}

fn boundary_bits(g: &BipartiteMultigraph, a: u32, b: u32) -> EdgeBits {
    let mut bits = EdgeBits::new(g.edge_count());
    for (id, (u, v)) in g.edges().enumerate() {
        if (a >> u & 1) != (b >> v & 1) {
            bits.set(id);
        }
    }
    bits
}

/// Every left relevant pair, `a` ascending then `b` ascending.
fn left_relevant_pairs(g: &BipartiteMultigraph) -> Vec<MaskPair> {
    let (nl, nr) = (g.n_left(), g.n_right());
    let mut out = Vec::new();
    for a in 1u32..1 << nl {
        for b in 0u32..1 << nr {
            if b.count_ones() < a.count_ones() {
                out.push(MaskPair {
                    a,
                    b,
                    witness: left_witness_bits(g, a, b),
                });
            }
        }
    }
    out
}

/// Minimal left pairs by the definition: no other left pair `(A', B')` with
/// `A' ⊊ A` and `E(A', B') ⊆ E(A, B)`. Plain double loop.
fn minimal_left_exhaustive(g: &BipartiteMultigraph) -> Vec<MaskPair> {
    let all = left_relevant_pairs(g);
    all.iter()
        .filter(|p| {
            !all.iter().any(|q| {
                q.a != p.a && q.a & !p.a == 0 && q.witness.is_subset_of(&p.witness)
            })
        })
        .cloned()
        .collect()
}

/// Minimal left pairs via the equivalent Hall-type test: `(A, B)` is
/// dominated iff some nonempty `A' ⊊ A` has `|N(A') ∩ B| < |A'|`, since the
/// cheapest `B'` with `E(A', B') ⊆ E(A, B)` is `N(A') ∩ B`.
fn minimal_left_by_hall(g: &BipartiteMultigraph) -> Vec<MaskPair> {
    let (nl, nr) = (g.n_left(), g.n_right());
    let nbr: Vec<u32> = (0..nl)
        .map(|u| g.neighbors(Side::Left, u).iter().fold(0, |m, &v| m | 1 << v))
        .collect();
    let n_of = |set: u32| -> u32 {
        (0..nl).filter(|&u| set >> u & 1 == 1).fold(0, |m, u| m | nbr[u])
    };
    let mut out = Vec::new();
    for a in 1u32..1 << nl {
        let subsets: Vec<(u32, u32)> = proper_nonempty_submasks(a)
            .map(|s| (s.count_ones(), n_of(s)))
            .collect();
        for b in 0u32..1 << nr {
            if b.count_ones() >= a.count_ones() {
                continue;
            }
            let dominated = subsets
                .iter()
                .any(|&(size, nbrs)| (nbrs & b).count_ones() < size);
            if !dominated {
                out.push(MaskPair {
                    a,
                    b,
                    witness: left_witness_bits(g, a, b),
                });
            }
        }
    }
    out
}

fn proper_nonempty_submasks(a: u32) -> impl Iterator<Item = u32> {
    let mut s = a;
    std::iter::from_fn(move || {
        s = (s.wrapping_sub(1)) & a;
        (s != 0).then_some(s)
    })
}

fn check_size(g: &BipartiteMultigraph, limit: usize) -> Result<()> {
    let largest = g.n_left().max(g.n_right());
    if largest > limit {
        return Err(Error::TooLarge {
            what: "side",
            actual: largest,
            limit,
        });
    }
    Ok(())
}

/// Runs a left-side routine for the requested side, returning pairs in the
/// coordinates of `g`'s frame and the frame graph the masks refer to.
fn oriented(g: &BipartiteMultigraph, side: Side) -> BipartiteMultigraph {
    match side {
        Side::Left => g.clone(),
        Side::Right => g.transpose(),
    }
}

fn to_pair(g: &BipartiteMultigraph, side: Side, p: &MaskPair) -> RelevantPair {
    let (nl, nr) = (g.n_left(), g.n_right());
    let bits = |mask: u32, n: usize| -> Vec<usize> { (0..n).filter(|&i| mask >> i & 1 == 1).collect() };
    let (a, b) = match side {
        Side::Left => (bits(p.a, nl), bits(p.b, nr)),
        // transposed frame: its left set is our B, its right set our A
        Side::Right => (bits(p.b, nl), bits(p.a, nr)),
    };
    RelevantPair {
        side,
        a: VertexSet::from_indices(nl, nr, &a, &[]).expect("in range"),
        b: VertexSet::from_indices(nl, nr, &[], &b).expect("in range"),
    }
}

/// All minimal relevant pairs of one side, by exhaustive comparison against
/// every candidate dominating pair. At most 5 vertices per side.
pub fn enumerate_minimal_relevant_pairs(g: &BipartiteMultigraph, side: Side) -> Result<Vec<RelevantPair>> {
    check_size(g, EXHAUSTIVE_MAX_SIDE)?;
    let frame = oriented(g, side);
    Ok(minimal_left_exhaustive(&frame)
        .iter()
        .map(|p| to_pair(g, side, p))
        .collect())
}

/// Same output as [`enumerate_minimal_relevant_pairs`], computed with the
/// Hall-type domination test. At most 8 vertices per side.
pub fn minimal_relevant_pairs_by_hall(g: &BipartiteMultigraph, side: Side) -> Result<Vec<RelevantPair>> {
    check_size(g, HALL_SCAN_MAX_SIDE)?;
    let frame = oriented(g, side);
    Ok(minimal_left_by_hall(&frame)
        .iter()
        .map(|p| to_pair(g, side, p))
        .collect())
}

/// Witness edge sets of every minimal pair on both sides (Hall-type scan).
pub fn minimal_witness_sets(g: &BipartiteMultigraph) -> Result<Vec<WitnessEdgeSet>> {
    check_size(g, HALL_SCAN_MAX_SIDE)?;
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let frame = oriented(g, side);
        for p in minimal_left_by_hall(&frame) {
            out.push(WitnessEdgeSet {
                pair: to_pair(g, side, &p),
                edge_ids: p.witness.ids(),
            });
        }
    }
    Ok(out)
}

/// Two minimal pairs with different witness sets but the same boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionCollision {
    pub first: RelevantPair,
    pub second: RelevantPair,
    pub boundary: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionReport {
    pub minimal_left: usize,
    pub minimal_right: usize,
    /// Pairs of minimal pairs with distinct witness sets that were compared.
    pub comparisons: usize,
    pub collision: Option<InjectionCollision>,
}

impl InjectionReport {
    pub fn is_injective(&self) -> bool {
        self.collision.is_none()
    }
}

/// Checks that minimal pairs with different witness sets map to different
/// boundary edge sets `δ_G(A ∪ B)`, separately for left and right pairs.
/// Requires a perfect matching and at most 5 vertices per side.
pub fn verify_witness_cut_injection(g: &BipartiteMultigraph) -> Result<InjectionReport> {
    check_size(g, EXHAUSTIVE_MAX_SIDE)?;
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_left: g.n_left(),
            n_right: g.n_right(),
        });
    }
    if hopcroft_karp(g).size() != g.n_left() {
        return Err(Error::NoPerfectMatching);
    }
    let mut report = InjectionReport {
        minimal_left: 0,
        minimal_right: 0,
        comparisons: 0,
        collision: None,
    };
    for side in [Side::Left, Side::Right] {
        let frame = oriented(g, side);
        let minimal = minimal_left_exhaustive(&frame);
        match side {
            Side::Left => report.minimal_left = minimal.len(),
            Side::Right => report.minimal_right = minimal.len(),
        }
        let boundaries: Vec<EdgeBits> = minimal.iter().map(|p| boundary_bits(&frame, p.a, p.b)).collect();
        for i in 0..minimal.len() {
            for j in i + 1..minimal.len() {
                if minimal[i].witness == minimal[j].witness {
                    continue;
                }
                report.comparisons += 1;
                if boundaries[i] == boundaries[j] && report.collision.is_none() {
                    report.collision = Some(InjectionCollision {
                        first: to_pair(g, side, &minimal[i]),
                        second: to_pair(g, side, &minimal[j]),
                        boundary: boundaries[i].ids(),
                    });
                }
            }
        }
    }
    Ok(report)
}
