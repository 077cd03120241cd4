//! Undirected simple graphs in compressed adjacency form.
//!
//! Edges are stored once as `(i, j)` with `i < j`, sorted lexicographically; an
//! edge's [`EdgeId`] is its position in that array. Every node's adjacency row is
//! sorted by neighbor index and carries the incident edge id, so both per-node
//! and per-edge sweeps visit interactions in a fixed order.

mod generate;
mod io;
mod spectral;

pub use generate::{gen_ba, gen_er, gen_ws, Family, GeneratorSpec};
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list};
pub use spectral::{spectral_norm_upper, spectral_norm_upper_with, DEFAULT_SPECTRAL_TOL};

use crate::error::{LoreError, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    incident: Vec<EdgeId>,
}

impl Graph {
    /// Builds a graph from an arbitrary list of undirected pairs.
    ///
    /// Pairs are normalized to `i < j` and sorted. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(LoreError::param(format!("self-loop on node {a}")));
            }
            if a >= n || b >= n {
                return Err(LoreError::param(format!(
                    "edge ({a}, {b}) has an endpoint >= n = {n}"
                )));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(LoreError::param(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted_unique(n, edges))
    }

    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut degree = vec![0usize; n];
        for &(i, j) in &edges {
            degree[i] += 1;
            degree[j] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0; 2 * edges.len()];
        let mut incident = vec![0; 2 * edges.len()];
        // Lexicographic edge order fills every row in ascending neighbor order:
        // row i first receives the j < i (as the second endpoint, ascending in j),
        // then the j > i (as the first endpoint, ascending in j).
        for (eid, &(i, j)) in edges.iter().enumerate() {
            neighbors[fill[j]] = i;
            incident[fill[j]] = eid;
            fill[j] += 1;
        }
        for (eid, &(i, j)) in edges.iter().enumerate() {
            neighbors[fill[i]] = j;
            incident[fill[i]] = eid;
            fill[i] += 1;
        }
        Graph {
            n,
            edges,
            offsets,
            neighbors,
            incident,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (NodeId, NodeId) {
        self.edges[id]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Edge ids incident to `v`, aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.incident[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_id(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        let (i, j) = (a.min(b), a.max(b));
        self.edges.binary_search(&(i, j)).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }
}

/// Largest node degree; 0 for an edgeless graph.
pub fn max_degree(graph: &Graph) -> usize {
    graph.max_degree()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::from_edges(5, [(3, 1), (0, 4), (1, 0), (2, 4), (1, 4)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 4), (1, 3), (1, 4), (2, 4)]);
        for v in 0..g.node_count() {
            let nb = g.neighbors(v);
            assert!(nb.windows(2).all(|w| w[0] < w[1]));
            for (&w, &e) in nb.iter().zip(g.incident_edges(v)) {
                let (a, b) = g.edge(e);
                assert!((a, b) == (v.min(w), v.max(w)));
                assert!(g.neighbors(w).contains(&v));
            }
        }
        assert_eq!(g.neighbors(4), &[0, 1, 2]);
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn star_max_degree() {
        assert_eq!(max_degree(&star(4)), 4);
        assert_eq!(max_degree(&Graph::empty(7)), 0);
    }

    #[test]
    fn edge_lookup() {
        let g = star(3);
        assert_eq!(g.edge_id(2, 0), Some(1));
        assert_eq!(g.edge_id(1, 2), None);
    }
}
