//! Simple undirected graphs on at most 24 vertices, stored as adjacency bitsets.
//!
//! Vertices are `0..n` internally. Anything user-facing (files, plans,
//! reports) uses 1-based labels; see [`label`] and [`Graph::from_labeled_edges`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

pub const MAX_VERTICES: usize = 24;

/// 1-based label of an internal vertex index.
pub fn label(v: Vertex) -> usize {
    v + 1
}

/// Iterates the set bits of `mask` in increasing order.
pub fn bits(mut mask: u32) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

pub fn mask_of(vertices: &[Vertex]) -> u32 {
    vertices.iter().fold(0, |m, &v| m | (1 << v))
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<u32>,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    /// Builds a graph from 0-based edges, rejecting self-loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.toggle_edge(u, v);
        }
        Ok(g)
    }

    /// Same as [`Graph::from_edges`] with 1-based labels.
    pub fn from_labeled_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let shifted = edges
            .iter()
            .map(|&(u, v)| {
                if u == 0 || v == 0 {
                    Err(Error::VertexOutOfRange {
                        vertex: 0,
                        n,
                    })
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::from_edges(n, &shifted)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.toggle_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn star(n: usize, center: Vertex) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        g.check(center)?;
        for v in (0..n).filter(|&v| v != center) {
            g.toggle_edge(center, v);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn ring(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn check(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn adjacency(&self) -> &[u32] {
        &self.adj
    }

    pub fn neighbors(&self, v: Vertex) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    pub fn toggle_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert_ne!(u, v);
        self.adj[u] ^= 1 << v;
        self.adj[v] ^= 1 << u;
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n)
            .flat_map(|u| bits(self.adj[u] & !((2u32 << u) - 1)).map(move |v| (u, v)))
            .collect()
    }

    /// Toggles every edge inside the neighbourhood of `v`.
    pub fn local_complement(&mut self, v: Vertex) {
        let nb = self.adj[v];
        for u in bits(nb) {
            // flip u's adjacency to the rest of the neighbourhood
            self.adj[u] ^= nb & !(1 << u);
        }
    }

    /// Removes every edge incident to `v`.
    pub fn isolate(&mut self, v: Vertex) {
        for u in bits(self.adj[v]) {
            self.adj[u] &= !(1 << v);
        }
        self.adj[v] = 0;
    }

    /// Graph obtained by isolating every vertex outside `keep`.
    pub fn restricted(&self, keep: u32) -> Graph {
        Graph {
            n: self.n,
            adj: (0..self.n)
                .map(|v| if keep & (1 << v) != 0 { self.adj[v] & keep } else { 0 })
                .collect(),
        }
    }

    /// Vertices reachable from `start` (including it).
    pub fn component(&self, start: Vertex) -> u32 {
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.component(0) == self.all_mask()
    }

    pub fn is_symmetric_without_loops(&self) -> bool {
        (0..self.n).all(|u| {
            self.adj[u] & (1 << u) == 0
                && self.adj[u] >> self.n == 0
                && bits(self.adj[u]).all(|v| self.adj[v] & (1 << u) != 0)
        })
    }

    /// Center of the star spanned by `vertices` if the graph restricted to
    /// them is exactly a star (for two vertices, the lower one).
    pub fn star_center(&self, vertices: u32) -> Option<Vertex> {
        let k = vertices.count_ones();
        if k < 2 {
            return None;
        }
        bits(vertices).find(|&c| {
            self.adj[c] == vertices & !(1 << c)
                && bits(vertices & !(1 << c)).all(|l| self.adj[l] == 1 << c)
        })
    }

    /// Whether the restriction to `vertices` is a complete graph with no
    /// edges leaving the set.
    pub fn is_complete_on(&self, vertices: u32) -> bool {
        bits(vertices).all(|v| self.adj[v] == vertices & !(1 << v))
    }

    pub fn labeled_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| (label(u), label(v)))
            .collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.labeled_edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(Graph::empty(25).is_err());
    }

    #[test]
    fn local_complement_of_path_center_is_triangle() {
        let mut g = Graph::path(3).unwrap();
        g.local_complement(1);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        g.local_complement(1);
        assert_eq!(g, Graph::path(3).unwrap());
    }

    #[test]
    fn star_and_complete_detection() {
        let s = Graph::star(4, 2).unwrap();
        assert_eq!(s.star_center(0b1111), Some(2));
        let k = Graph::complete(4).unwrap();
        assert!(k.is_complete_on(0b1111));
        assert_eq!(k.star_center(0b1111), None);
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.star_center(0b11), Some(0));
    }

    #[test]
    fn isolate_and_component() {
        let mut g = Graph::ring(6).unwrap();
        assert!(g.is_connected());
        g.isolate(0);
        g.isolate(3);
        assert_eq!(g.component(1), 0b000110);
        assert!(g.is_symmetric_without_loops());
    }
}
