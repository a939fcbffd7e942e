use std::fmt;

use super::Side;
use crate::error::{Error, Result};

/// A subset of `U ∪ V` for a graph with a fixed shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    left: Vec<bool>,
    right: Vec<bool>,
}

impl VertexSet {
    pub fn empty(n_left: usize, n_right: usize) -> Self {
        Self {
            left: vec![false; n_left],
            right: vec![false; n_right],
        }
    }

    pub fn full(n_left: usize, n_right: usize) -> Self {
        Self {
            left: vec![true; n_left],
            right: vec![true; n_right],
        }
    }

    /// Set holding the listed vertices. Duplicates collapse.
    pub fn from_indices(n_left: usize, n_right: usize, left: &[usize], right: &[usize]) -> Result<Self> {
        let mut s = Self::empty(n_left, n_right);
        for &u in left {
            if u >= n_left {
                return Err(Error::VertexOutOfRange(format!("left {u} >= {n_left}")));
            }
            s.left[u] = true;
        }
        for &v in right {
            if v >= n_right {
                return Err(Error::VertexOutOfRange(format!("right {v} >= {n_right}")));
            }
            s.right[v] = true;
        }
        Ok(s)
    }

    /// Set from a bitmask over the unified index space (left first).
    pub fn from_mask(n_left: usize, n_right: usize, mask: u64) -> Self {
        assert!(n_left + n_right <= 64, "mask sets hold at most 64 vertices");
        Self {
            left: (0..n_left).map(|i| mask >> i & 1 == 1).collect(),
            right: (0..n_right).map(|i| mask >> (n_left + i) & 1 == 1).collect(),
        }
    }

    /// Bitmask over the unified index space; requires at most 64 vertices.
    pub fn to_mask(&self) -> u64 {
        assert!(self.left.len() + self.right.len() <= 64);
        self.unified_indices().into_iter().fold(0, |m, i| m | 1 << i)
    }

    pub fn n_left(&self) -> usize {
        self.left.len()
    }

    pub fn n_right(&self) -> usize {
        self.right.len()
    }

    pub fn contains(&self, side: Side, x: usize) -> bool {
        match side {
            Side::Left => self.left[x],
            Side::Right => self.right[x],
        }
    }

    pub fn insert(&mut self, side: Side, x: usize) {
        match side {
            Side::Left => self.left[x] = true,
            Side::Right => self.right[x] = true,
        }
    }

    pub fn remove(&mut self, side: Side, x: usize) {
        match side {
            Side::Left => self.left[x] = false,
            Side::Right => self.right[x] = false,
        }
    }

    pub fn len(&self) -> usize {
        self.count(Side::Left) + self.count(Side::Right)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, side: Side) -> usize {
        self.bits(side).iter().filter(|&&b| b).count()
    }

    /// Members on one side, ascending.
    pub fn indices(&self, side: Side) -> Vec<usize> {
        self.bits(side)
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect()
    }

    /// Members in the unified index space, ascending.
    pub fn unified_indices(&self) -> Vec<usize> {
        let n_left = self.n_left();
        let mut out = self.indices(Side::Left);
        out.extend(self.indices(Side::Right).into_iter().map(|v| v + n_left));
        out
    }

    pub fn complement(&self) -> Self {
        Self {
            left: self.left.iter().map(|b| !b).collect(),
            right: self.right.iter().map(|b| !b).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!((self.n_left(), self.n_right()), (other.n_left(), other.n_right()));
        Self {
            left: self.left.iter().zip(&other.left).map(|(a, b)| a | b).collect(),
            right: self.right.iter().zip(&other.right).map(|(a, b)| a | b).collect(),
        }
    }

    /// The same set with the two sides exchanged.
    pub fn transpose(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    fn bits(&self, side: Side) -> &[bool] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VertexSet {
    /// `{u0,u2,v1}` style listing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .indices(Side::Left)
            .into_iter()
            .map(|u| format!("u{u}"))
            .chain(self.indices(Side::Right).into_iter().map(|v| format!("v{v}")))
            .collect();
        write!(f, "{{{}}}", names.join(","))
    }
}
