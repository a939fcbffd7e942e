//! Bipartite multigraph storage and the primitives shared by every algorithm.
//!
//! Vertices are dense 0-based indices on each side. Where a single index
//! space is needed (vertex sets, components), left vertex `u` maps to `u` and
//! right vertex `v` maps to `n_left + v`.

mod io;
mod matching;
mod vertex_set;

pub use io::{read_graph, write_graph};
pub use matching::{validate_perfect_matching, Matching};
pub use vertex_set::VertexSet;

use crate::error::{Error, Result};

/// Stable identity of an edge: its position in the construction edge list.
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Immutable bipartite multigraph with CSR adjacency on both sides.
///
/// Parallel edges are distinct edges. Edge `i` is the `i`-th pair passed to
/// [`BipartiteMultigraph::new`] for the lifetime of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMultigraph {
    n_left: usize,
    n_right: usize,
    edges: Vec<(u32, u32)>,
    left_offsets: Vec<usize>,
    left_edges: Vec<u32>,
    left_nbrs: Vec<u32>,
    right_offsets: Vec<usize>,
    right_edges: Vec<u32>,
    right_nbrs: Vec<u32>,
}

impl BipartiteMultigraph {
    /// Builds a graph from `(left, right)` pairs, preserving their order.
    pub fn new(n_left: usize, n_right: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_left > u32::MAX as usize || n_right > u32::MAX as usize {
            return Err(Error::Parameter("vertex count exceeds u32 range".into()));
        }
        if edges.len() > u32::MAX as usize {
            return Err(Error::Parameter("edge count exceeds u32 range".into()));
        }
        let mut packed = Vec::with_capacity(edges.len());
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u >= n_left || v >= n_right {
                return Err(Error::EdgeOutOfRange {
                    index,
                    u,
                    v,
                    n_left,
                    n_right,
                });
            }
            packed.push((u as u32, v as u32));
        }
        Ok(Self::from_packed(n_left, n_right, packed))
    }

    /// Graph with no edges.
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        Self::from_packed(n_left, n_right, Vec::new())
    }

    /// Complete bipartite graph `K_{a,b}`, edges in row-major order.
    pub fn complete(a: usize, b: usize) -> Self {
        let edges = (0..a as u32)
            .flat_map(|u| (0..b as u32).map(move |v| (u, v)))
            .collect();
        Self::from_packed(a, b, edges)
    }

    /// Callers guarantee every endpoint is in range.
    pub(crate) fn from_packed(n_left: usize, n_right: usize, edges: Vec<(u32, u32)>) -> Self {
        debug_assert!(edges
            .iter()
            .all(|&(u, v)| (u as usize) < n_left && (v as usize) < n_right));
        let (left_offsets, left_edges, left_nbrs) =
            csr(n_left, edges.iter().map(|&(u, v)| (u, v)), edges.len());
        let (right_offsets, right_edges, right_nbrs) =
            csr(n_right, edges.iter().map(|&(u, v)| (v, u)), edges.len());
        Self {
            n_left,
            n_right,
            edges,
            left_offsets,
            left_edges,
            left_nbrs,
            right_offsets,
            right_edges,
            right_nbrs,
        }
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn vertex_count(&self) -> usize {
        self.n_left + self.n_right
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_left == self.n_right
    }

    /// Endpoints `(left, right)` of edge `id`.
    pub fn edge(&self, id: EdgeId) -> (usize, usize) {
        let (u, v) = self.edges[id];
        (u as usize, v as usize)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub(crate) fn packed_edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Edge ids incident to a vertex, in construction order.
    pub fn incident(&self, side: Side, x: usize) -> &[u32] {
        match side {
            Side::Left => &self.left_edges[self.left_offsets[x]..self.left_offsets[x + 1]],
            Side::Right => &self.right_edges[self.right_offsets[x]..self.right_offsets[x + 1]],
        }
    }

    /// Opposite endpoints of the edges incident to a vertex, aligned with
    /// [`BipartiteMultigraph::incident`].
    pub fn neighbors(&self, side: Side, x: usize) -> &[u32] {
        match side {
            Side::Left => &self.left_nbrs[self.left_offsets[x]..self.left_offsets[x + 1]],
            Side::Right => &self.right_nbrs[self.right_offsets[x]..self.right_offsets[x + 1]],
        }
    }

    pub fn degree(&self, side: Side, x: usize) -> usize {
        match side {
            Side::Left => self.left_offsets[x + 1] - self.left_offsets[x],
            Side::Right => self.right_offsets[x + 1] - self.right_offsets[x],
        }
    }

    /// Common degree of all vertices, counting parallel edges, or `None` if
    /// any two vertices differ. A graph without vertices has no degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut degrees = (0..self.n_left)
            .map(|u| self.degree(Side::Left, u))
            .chain((0..self.n_right).map(|v| self.degree(Side::Right, v)));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// True when no two edges join the same pair of vertices.
    pub fn is_simple(&self) -> bool {
        let mut seen = vec![u32::MAX; self.n_right];
        (0..self.n_left).all(|u| {
            self.neighbors(Side::Left, u).iter().all(|&v| {
                let fresh = seen[v as usize] != u as u32;
                seen[v as usize] = u as u32;
                fresh
            })
        })
    }

    fn check_set(&self, s: &VertexSet) {
        assert!(
            s.n_left() == self.n_left && s.n_right() == self.n_right,
            "vertex set shape {}+{} does not match graph {}+{}",
            s.n_left(),
            s.n_right(),
            self.n_left,
            self.n_right
        );
    }

    /// Number of edges with exactly one endpoint in `s`, with multiplicity.
    pub fn cut_size(&self, s: &VertexSet) -> usize {
        self.check_set(s);
        self.edges
            .iter()
            .filter(|&&(u, v)| s.contains(Side::Left, u as usize) != s.contains(Side::Right, v as usize))
            .count()
    }

    /// Ids of the edges crossing the boundary of `s`, ascending.
    pub fn cut_edges(&self, s: &VertexSet) -> Vec<EdgeId> {
        self.check_set(s);
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| s.contains(Side::Left, u as usize) != s.contains(Side::Right, v as usize))
            .map(|(id, _)| id)
            .collect()
    }

    /// Subgraph made of the listed edges on the same vertex set. Returns the
    /// subgraph and, for each of its edges, the id of the edge in `self`.
    pub fn edge_subgraph(&self, ids: impl IntoIterator<Item = EdgeId>) -> (Self, Vec<EdgeId>) {
        let origin: Vec<EdgeId> = ids.into_iter().collect();
        let edges = origin.iter().map(|&id| self.edges[id]).collect();
        (Self::from_packed(self.n_left, self.n_right, edges), origin)
    }

    /// Subgraph induced by `s`, relabelled densely in index order.
    pub fn induced_subgraph(&self, s: &VertexSet) -> InducedSubgraph {
        self.check_set(s);
        let left_map = s.indices(Side::Left);
        let right_map = s.indices(Side::Right);
        let mut left_new = vec![u32::MAX; self.n_left];
        let mut right_new = vec![u32::MAX; self.n_right];
        for (i, &u) in left_map.iter().enumerate() {
            left_new[u] = i as u32;
        }
        for (i, &v) in right_map.iter().enumerate() {
            right_new[v] = i as u32;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            let (nu, nv) = (left_new[u as usize], right_new[v as usize]);
            if nu != u32::MAX && nv != u32::MAX {
                edges.push((nu, nv));
                edge_map.push(id);
            }
        }
        InducedSubgraph {
            graph: Self::from_packed(left_map.len(), right_map.len(), edges),
            left_map,
            right_map,
            edge_map,
        }
    }

    /// The same graph with the roles of the two sides exchanged.
    pub fn transpose(&self) -> Self {
        Self::from_packed(
            self.n_right,
            self.n_left,
            self.edges.iter().map(|&(u, v)| (v, u)).collect(),
        )
    }

    /// Connected-component label for every vertex in the unified index space.
    /// Labels are assigned in order of each component's smallest vertex.
    pub fn connected_components(&self) -> Vec<usize> {
        let total = self.vertex_count();
        let mut label = vec![usize::MAX; total];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..total {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(x) = stack.pop() {
                let (side, local, offset) = if x < self.n_left {
                    (Side::Left, x, self.n_left)
                } else {
                    (Side::Right, x - self.n_left, 0)
                };
                for &y in self.neighbors(side, local) {
                    let y = y as usize + offset;
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// Induced subgraph plus the maps back to the host graph.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: BipartiteMultigraph,
    /// Host index of each left vertex of `graph`.
    pub left_map: Vec<usize>,
    /// Host index of each right vertex of `graph`.
    pub right_map: Vec<usize>,
    /// Host edge id of each edge of `graph`.
    pub edge_map: Vec<EdgeId>,
}

fn csr(
    n: usize,
    pairs: impl Iterator<Item = (u32, u32)> + Clone,
    m: usize,
) -> (Vec<usize>, Vec<u32>, Vec<u32>) {
    let mut offsets = vec![0usize; n + 1];
    for (x, _) in pairs.clone() {
        offsets[x as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets[..n].to_vec();
    let mut ids = vec![0u32; m];
    let mut nbrs = vec![0u32; m];
    for (id, (x, y)) in pairs.enumerate() {
        let slot = &mut cursor[x as usize];
        ids[*slot] = id as u32;
        nbrs[*slot] = y;
        *slot += 1;
    }
    (offsets, ids, nbrs)
}
