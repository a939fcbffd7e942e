use super::{BipartiteMultigraph, Side};
use crate::error::{Error, Result};

/// Vertex-disjoint set of left-right pairs, stored as mutually inverse
/// partner maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    left_partner: Vec<Option<usize>>,
    right_partner: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        Self {
            left_partner: vec![None; n_left],
            right_partner: vec![None; n_right],
            size: 0,
        }
    }

    /// Builds a matching from pairs, rejecting out-of-range or shared vertices.
    pub fn from_pairs(n_left: usize, n_right: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(n_left, n_right);
        for &(u, v) in pairs {
            if u >= n_left || v >= n_right {
                return Err(Error::InvalidMatching(format!("pair ({u}, {v}) out of range")));
            }
            if m.left_partner[u].is_some() || m.right_partner[v].is_some() {
                return Err(Error::InvalidMatching(format!("pair ({u}, {v}) reuses a vertex")));
            }
            m.set(u, v);
        }
        Ok(m)
    }

    /// Matches `u` with `v`. Both must currently be free.
    pub(crate) fn set(&mut self, u: usize, v: usize) {
        debug_assert!(self.left_partner[u].is_none() && self.right_partner[v].is_none());
        self.left_partner[u] = Some(v);
        self.right_partner[v] = Some(u);
        self.size += 1;
    }

    pub(crate) fn from_partner_maps(left: Vec<Option<usize>>, right: Vec<Option<usize>>) -> Self {
        let size = left.iter().filter(|p| p.is_some()).count();
        debug_assert!(left
            .iter()
            .enumerate()
            .all(|(u, p)| p.is_none_or(|v| right[v] == Some(u))));
        Self {
            left_partner: left,
            right_partner: right,
            size,
        }
    }

    pub fn n_left(&self) -> usize {
        self.left_partner.len()
    }

    pub fn n_right(&self) -> usize {
        self.right_partner.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn left_partner(&self, u: usize) -> Option<usize> {
        self.left_partner[u]
    }

    pub fn right_partner(&self, v: usize) -> Option<usize> {
        self.right_partner[v]
    }

    pub fn partner(&self, side: Side, x: usize) -> Option<usize> {
        match side {
            Side::Left => self.left_partner[x],
            Side::Right => self.right_partner[x],
        }
    }

    /// Matched pairs ordered by left index.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left_partner
            .iter()
            .enumerate()
            .filter_map(|(u, p)| p.map(|v| (u, v)))
    }

    /// Every matched pair is joined by at least one edge of `g`.
    pub fn is_subgraph_of(&self, g: &BipartiteMultigraph) -> bool {
        self.n_left() == g.n_left()
            && self.n_right() == g.n_right()
            && self
                .pairs()
                .all(|(u, v)| g.neighbors(Side::Left, u).contains(&(v as u32)))
    }
}

/// True iff `m` covers every vertex of the square graph `g` using edges of `g`.
pub fn validate_perfect_matching(g: &BipartiteMultigraph, m: &Matching) -> Result<bool> {
    if !g.is_square() {
        return Err(Error::NotSquare {
            n_left: g.n_left(),
            n_right: g.n_right(),
        });
    }
    Ok(m.size() == g.n_left() && m.is_subgraph_of(g))
}
