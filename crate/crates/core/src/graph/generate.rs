//! Seeded random graph families: Erdős–Rényi G(n, p), Barabási–Albert
//! preferential attachment, and Watts–Strogatz small-world rewiring.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, NodeId};
use crate::error::{LoreError, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Er { p: f64 },
    Ba { m: usize },
    Ws { k: usize, rewire: f64 },
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Er { .. } => "er",
            Family::Ba { .. } => "ba",
            Family::Ws { .. } => "ws",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph> {
        match self.family {
            Family::Er { p } => gen_er(self.n, p, self.seed),
            Family::Ba { m } => gen_ba(self.n, m, self.seed),
            Family::Ws { k, rewire } => gen_ws(self.n, k, rewire, self.seed),
        }
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(LoreError::param(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// G(n, p): every unordered pair is drawn independently, in lexicographic order.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(LoreError::param("n must be >= 1"));
    }
    check_probability("p", p)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Preferential attachment seeded with a clique on `m + 1` nodes.
///
/// Each later node picks `m` distinct targets with probability proportional to
/// their current degree, so `|E| = C(m+1, 2) + m (n - m - 1)`.
pub fn gen_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(LoreError::param(format!(
            "BA requires 1 <= m < n, got m = {m}, n = {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m * (m + 1) / 2 + m * (n - m - 1));
    // One entry per edge endpoint; uniform draws from it are degree-proportional.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for i in 0..=m {
        for j in i + 1..=m {
            edges.push((i, j));
            endpoints.push(i);
            endpoints.push(j);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for v in m + 1..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_sorted_unique(n, edges))
}

/// Ring lattice of even degree `k`, then each lattice edge `(i, i + d)` has its
/// far endpoint rewired with probability `rewire` to a uniform node that is
/// neither `i` nor already adjacent to it.
pub fn gen_ws(n: usize, k: usize, rewire: f64, seed: u64) -> Result<Graph> {
    if k == 0 || !k.is_multiple_of(2) || k >= n {
        return Err(LoreError::param(format!(
            "WS requires even k with 0 < k < n, got k = {k}, n = {n}"
        )));
    }
    check_probability("rewire", rewire)?;
    let mut rng = rng_from_seed(seed);
    let mut adj: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for d in 1..=k / 2 {
            let j = (i + d) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    for d in 1..=k / 2 {
        for i in 0..n {
            let j = (i + d) % n;
            if !adj[i].contains(&j) || rng.gen::<f64>() >= rewire {
                continue;
            }
            if adj[i].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != i && !adj[i].contains(&w) {
                    break w;
                }
            };
            adj[i].remove(&j);
            adj[j].remove(&i);
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    let mut edges = Vec::with_capacity(n * k / 2);
    for (i, row) in adj.iter().enumerate() {
        edges.extend(row.range(i + 1..).map(|&j| (i, j)));
    }
    Ok(Graph::from_sorted_unique(n, edges))
}
