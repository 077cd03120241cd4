//! Active-set construction under a hard per-step edge budget.
//!
//! Each strategy fills exactly `B = max(floor(rho |E|), 1)` slots (capped at
//! `|E|`) at its refresh steps and reuses the previous set in between. Every
//! top-k ranks by score descending and breaks ties toward the lower edge id.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{EvalCounter, SolverState};
use crate::error::{LoreError, Result};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::rng::{rng_from_seed, ChaCha8Rng};

pub const DEFAULT_RHO: f64 = 0.08;
pub const DEFAULT_GAMMA: f64 = 0.05;
pub const DEFAULT_REFRESH: usize = 10;
pub const DEFAULT_LAMBDA_STAB: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Static degree skeleton plus dynamic hotspots by uncertainty/instability.
    Lore,
    /// Top edges by `x_i x_j`.
    GreedyConflict,
    /// Top edges by `(deg_i + deg_j)(x_i + x_j)`.
    GreedyDegDyn,
    /// The LoRe rule evaluated once at `t = 0`.
    LoreStatic,
    /// Top edges by `deg_i + deg_j`, fixed.
    GreedyDegree,
    /// Uniform sample without replacement.
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Lore,
        Strategy::GreedyConflict,
        Strategy::GreedyDegDyn,
        Strategy::LoreStatic,
        Strategy::GreedyDegree,
        Strategy::Random,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Lore => "lore",
            Strategy::GreedyConflict => "greedy-conflict",
            Strategy::GreedyDegDyn => "greedy-deg-dyn",
            Strategy::LoreStatic => "lore-static",
            Strategy::GreedyDegree => "greedy-degree",
            Strategy::Random => "random",
        }
    }

    /// Static strategies refresh only at `t = 0`.
    pub fn is_static(&self) -> bool {
        matches!(self, Strategy::LoreStatic | Strategy::GreedyDegree)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = LoreError;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s.to_ascii_lowercase().replace('_', "-"))
            .ok_or_else(|| {
                LoreError::param(format!(
                    "unknown strategy {s:?}; expected one of {}",
                    Strategy::ALL.map(|s| s.name()).join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BudgetConfig {
    pub rho: f64,
    pub gamma: f64,
    pub refresh: usize,
    pub lambda_stab: f64,
    pub strategy: Strategy,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            rho: DEFAULT_RHO,
            gamma: DEFAULT_GAMMA,
            refresh: DEFAULT_REFRESH,
            lambda_stab: DEFAULT_LAMBDA_STAB,
            strategy: Strategy::Lore,
        }
    }
}

impl BudgetConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(LoreError::param(format!("rho must lie in (0, 1], got {}", self.rho)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(LoreError::param(format!("gamma must lie in [0, 1], got {}", self.gamma)));
        }
        if self.refresh == 0 {
            return Err(LoreError::param("refresh interval must be >= 1"));
        }
        if !(self.lambda_stab >= 0.0 && self.lambda_stab.is_finite()) {
            return Err(LoreError::param(format!(
                "lambda_stab must be >= 0, got {}",
                self.lambda_stab
            )));
        }
        Ok(())
    }

    pub fn budget(&self, edge_count: usize) -> usize {
        budget_size(self.rho, edge_count)
    }
}

/// `min(max(floor(rho m), 1), m)`, and 0 for an edgeless graph.
pub fn budget_size(rho: f64, edge_count: usize) -> usize {
    if edge_count == 0 {
        return 0;
    }
    // absorb representation error such as 0.29 * 100 = 28.999999999999996
    let raw = (rho * edge_count as f64 + 1e-9).floor() as usize;
    raw.max(1).min(edge_count)
}

/// `1 - |2x - 1|`: 1 at `x = 0.5`, 0 at either endpoint.
#[inline]
pub fn node_uncertainty(x: f64) -> f64 {
    1.0 - (2.0 * x - 1.0).abs()
}

/// Uncertainty product plus weighted one-step movement of both endpoints.
#[inline]
pub fn edge_score(edge: (NodeId, NodeId), state: &SolverState, lambda_stab: f64) -> f64 {
    let (i, j) = edge;
    let (x, prev) = (&state.x, &state.x_prev);
    node_uncertainty(x[i]) * node_uncertainty(x[j])
        + lambda_stab * ((x[i] - prev[i]).abs() + (x[j] - prev[j]).abs())
}

/// The `k` highest-scoring candidates, ties toward lower id, returned sorted by id.
pub fn top_k(mut scored: Vec<(f64, EdgeId)>, k: usize) -> Vec<EdgeId> {
    let rank = |a: &(f64, EdgeId), b: &(f64, EdgeId)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
    if k == 0 {
        return Vec::new();
    }
    if k < scored.len() {
        scored.select_nth_unstable_by(k - 1, rank);
        scored.truncate(k);
    }
    let mut ids: Vec<EdgeId> = scored.into_iter().map(|(_, id)| id).collect();
    ids.sort_unstable();
    ids
}

fn degree_sum(graph: &Graph, (i, j): (NodeId, NodeId)) -> f64 {
    (graph.degree(i) + graph.degree(j)) as f64
}

/// The `floor(gamma B)` edges with the largest endpoint-degree sum.
pub fn select_skeleton(graph: &Graph, gamma: f64, budget: usize) -> Vec<EdgeId> {
    let k = ((gamma * budget as f64 + 1e-9).floor() as usize).min(budget);
    let scored = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(id, &e)| (degree_sum(graph, e), id))
        .collect();
    top_k(scored, k)
}

/// A routed edge subset with its restricted adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet {
    edge_ids: Vec<EdgeId>,
    skeleton_ids: Vec<EdgeId>,
    created_at: usize,
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
}

impl ActiveSet {
    pub fn new(
        graph: &Graph,
        mut edge_ids: Vec<EdgeId>,
        mut skeleton_ids: Vec<EdgeId>,
        created_at: usize,
    ) -> Result<Self> {
        edge_ids.sort_unstable();
        edge_ids.dedup();
        skeleton_ids.sort_unstable();
        skeleton_ids.dedup();
        if edge_ids.last().is_some_and(|&id| id >= graph.edge_count()) {
            return Err(LoreError::Usage("active edge id out of range".into()));
        }
        if skeleton_ids.iter().any(|id| edge_ids.binary_search(id).is_err()) {
            return Err(LoreError::Usage("skeleton must be a subset of the active set".into()));
        }
        let mut mask = vec![false; graph.edge_count()];
        for &id in &edge_ids {
            mask[id] = true;
        }
        let n = graph.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(2 * edge_ids.len());
        offsets.push(0);
        for v in 0..n {
            for (&w, &e) in graph.neighbors(v).iter().zip(graph.incident_edges(v)) {
                if mask[e] {
                    neighbors.push(w);
                }
            }
            offsets.push(neighbors.len());
        }
        Ok(ActiveSet {
            edge_ids,
            skeleton_ids,
            created_at,
            offsets,
            neighbors,
        })
    }

    /// Every edge of the graph.
    pub fn full(graph: &Graph, created_at: usize) -> Self {
        Self::new(graph, (0..graph.edge_count()).collect(), Vec::new(), created_at)
            .expect("all edge ids are valid")
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn skeleton_ids(&self) -> &[EdgeId] {
        &self.skeleton_ids
    }

    pub fn created_at(&self) -> usize {
        self.created_at
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edge_ids.binary_search(&id).is_ok()
    }

    /// Per-edge membership flags for a graph with `edge_count` edges.
    pub fn mask(&self, edge_count: usize) -> Vec<bool> {
        let mut mask = vec![false; edge_count];
        for &id in &self.edge_ids {
            mask[id] = true;
        }
        mask
    }

    /// Sorted neighbors of `v` reachable through routed edges.
    pub fn active_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn active_degree(&self, v: NodeId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

pub fn is_refresh_step(strategy: Strategy, t: usize, refresh: usize) -> bool {
    t == 0 || (!strategy.is_static() && t.is_multiple_of(refresh))
}

fn lore_selection(
    state: &SolverState,
    graph: &Graph,
    cfg: &BudgetConfig,
    skeleton: &[EdgeId],
    budget: usize,
    counter: &mut EvalCounter,
) -> Vec<EdgeId> {
    let mut in_skel = vec![false; graph.edge_count()];
    for &id in skeleton {
        in_skel[id] = true;
    }
    let scored: Vec<(f64, EdgeId)> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(id, _)| !in_skel[*id])
        .map(|(id, &e)| (edge_score(e, state, cfg.lambda_stab), id))
        .collect();
    counter.score_evals += scored.len() as u64;
    let mut ids = top_k(scored, budget - skeleton.len());
    ids.extend_from_slice(skeleton);
    ids
}

fn score_all(
    graph: &Graph,
    counter: &mut EvalCounter,
    score: impl Fn((NodeId, NodeId)) -> f64,
) -> Vec<(f64, EdgeId)> {
    counter.score_evals += graph.edge_count() as u64;
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(id, &e)| (score(e), id))
        .collect()
}

/// Selects `M_t` for step `t`.
///
/// On refresh steps the set is recomputed by the strategy's rule; otherwise
/// `prev` is returned unchanged. `rng` is consumed only by [`Strategy::Random`].
#[allow(clippy::too_many_arguments)]
pub fn build_active_set<R: Rng + ?Sized>(
    strategy: Strategy,
    state: &SolverState,
    graph: &Graph,
    cfg: &BudgetConfig,
    prev: Option<&ActiveSet>,
    t: usize,
    rng: &mut R,
    counter: &mut EvalCounter,
) -> Result<ActiveSet> {
    if !is_refresh_step(strategy, t, cfg.refresh) {
        return prev.cloned().ok_or_else(|| {
            LoreError::Usage(format!("step {t} is not a refresh step and no previous set was given"))
        });
    }
    let skeleton = match strategy {
        Strategy::Lore | Strategy::LoreStatic => {
            select_skeleton(graph, cfg.gamma, cfg.budget(graph.edge_count()))
        }
        _ => Vec::new(),
    };
    select_with_skeleton(strategy, state, graph, cfg, skeleton, t, rng, counter)
}

#[allow(clippy::too_many_arguments)]
fn select_with_skeleton<R: Rng + ?Sized>(
    strategy: Strategy,
    state: &SolverState,
    graph: &Graph,
    cfg: &BudgetConfig,
    skeleton: Vec<EdgeId>,
    t: usize,
    rng: &mut R,
    counter: &mut EvalCounter,
) -> Result<ActiveSet> {
    let budget = cfg.budget(graph.edge_count());
    let x = &state.x;
    let ids = match strategy {
        Strategy::Lore | Strategy::LoreStatic => {
            lore_selection(state, graph, cfg, &skeleton, budget, counter)
        }
        Strategy::GreedyConflict => top_k(score_all(graph, counter, |(i, j)| x[i] * x[j]), budget),
        Strategy::GreedyDegDyn => top_k(
            score_all(graph, counter, |e| degree_sum(graph, e) * (x[e.0] + x[e.1])),
            budget,
        ),
        Strategy::GreedyDegree => top_k(score_all(graph, counter, |e| degree_sum(graph, e)), budget),
        Strategy::Random => rand::seq::index::sample(rng, graph.edge_count(), budget).into_vec(),
    };
    ActiveSet::new(graph, ids, skeleton, t)
}

/// `|A ∩ B| / |A|` for sorted id lists.
pub fn overlap_fraction(a: &[EdgeId], b: &[EdgeId]) -> Result<f64> {
    if a.is_empty() {
        return Err(LoreError::Undefined("overlap of an empty set".into()));
    }
    let (mut i, mut j, mut common) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(common as f64 / a.len() as f64)
}

/// Per-trajectory routing state: the fixed skeleton, the seeded sampler, and
/// the most recent set.
#[derive(Debug, Clone)]
pub struct Router {
    strategy: Strategy,
    cfg: BudgetConfig,
    skeleton: Vec<EdgeId>,
    rng: ChaCha8Rng,
    current: Option<ActiveSet>,
}

/// Result of one routing call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteEvent {
    pub refreshed: bool,
    /// Overlap with the set replaced by this refresh, if any.
    pub overlap: Option<f64>,
}

impl Router {
    pub fn new(graph: &Graph, cfg: BudgetConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let skeleton = match cfg.strategy {
            Strategy::Lore | Strategy::LoreStatic => {
                select_skeleton(graph, cfg.gamma, cfg.budget(graph.edge_count()))
            }
            _ => Vec::new(),
        };
        Ok(Router {
            strategy: cfg.strategy,
            cfg,
            skeleton,
            rng: rng_from_seed(seed),
            current: None,
        })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn current(&self) -> Option<&ActiveSet> {
        self.current.as_ref()
    }

    pub fn route(
        &mut self,
        state: &SolverState,
        graph: &Graph,
        t: usize,
        counter: &mut EvalCounter,
    ) -> Result<RouteEvent> {
        if self.current.is_some() && !is_refresh_step(self.strategy, t, self.cfg.refresh) {
            return Ok(RouteEvent {
                refreshed: false,
                overlap: None,
            });
        }
        let next = select_with_skeleton(
            self.strategy,
            state,
            graph,
            &self.cfg,
            self.skeleton.clone(),
            t,
            &mut self.rng,
            counter,
        )?;
        let overlap = match &self.current {
            Some(prev) if !prev.is_empty() => Some(overlap_fraction(prev.edge_ids(), next.edge_ids())?),
            _ => None,
        };
        self.current = Some(next);
        Ok(RouteEvent {
            refreshed: true,
            overlap,
        })
    }
}
