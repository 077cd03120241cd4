//! Runtime check of the trajectory-error recursion between a budgeted and a
//! full-support run started from the same state.
//!
//! With `F` the full step and `F~` the budgeted one, the budgeted trajectory
//! `x~` and the reference `x` satisfy
//!
//! ```text
//! e_{t+1} = ||F~(x~_t) - F(x_t)|| <= L e_t + ||delta_t||,   delta_t = F~(x~_t) - F(x~_t)
//! ```
//!
//! where `L` is a Lipschitz constant of `F`. The pre-clip map `x + eta(1 - beta A x)`
//! has Jacobian `I - eta beta A`, and clipping is 1-Lipschitz, so
//! `L = 1 + eta beta ||A||_2` is certified. All norms are Euclidean.

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    budgeted_step, cluster_update, full_step, init_state, DynamicsConfig, EvalCounter, SolverState,
};
use crate::error::{LoreError, Result};
use crate::graph::{spectral_norm_upper, Graph};
use crate::recall::{refresh_bath_cache, BathCache};
use crate::rng::{derive_seed, stream};
use crate::routing::{node_uncertainty, ActiveSet, BudgetConfig, Router};

/// Absolute slack allowed in the recursion check.
pub const RECURSION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// `||x~_t - x_t||`, length `T + 1`; `e[0] = 0`.
    pub e: Vec<f64>,
    /// `||F~(x~_t) - F(x~_t)||`, length `T`.
    pub delta: Vec<f64>,
    /// Omitted-message mass at `x~_t`, length `T`.
    pub eps_rho: Vec<f64>,
    /// Displacement caused by recall, `||F~_recall(x~_t) - F~_cluster(x~_t)||`; zero when off.
    pub r: Vec<f64>,
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub violated_steps: Vec<usize>,
    /// `sum_k L^{T-1-k} delta_k`.
    pub unrolled_bound: f64,
    pub unrolled_holds: bool,
    pub strategy: String,
    pub rho: f64,
    pub recall: bool,
    pub seed: u64,
}

impl BoundReport {
    /// Steps where `delta_t > eps_t + r_t + tol`.
    pub fn decomposition_failures(&self) -> Vec<usize> {
        (0..self.delta.len())
            .filter(|&t| self.delta[t] > self.eps_rho[t] + self.r[t] + RECURSION_TOL)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivityStats {
    /// Mean `u_i u_j` over routed edges; `None` when nothing is routed.
    pub cluster_mean_u: Option<f64>,
    /// Mean `u_i u_j` over omitted edges; `None` when the bath is empty.
    pub bath_mean_u: Option<f64>,
    pub step: usize,
}

/// `min(1 + eta beta ||A||_2^up, 1 + eta beta Delta_max)`.
pub fn lipschitz_bound(graph: &Graph, cfg: &DynamicsConfig) -> f64 {
    let k = cfg.eta * cfg.beta;
    let spectral = 1.0 + k * spectral_norm_upper(graph);
    let degree = 1.0 + k * graph.max_degree() as f64;
    spectral.min(degree)
}

/// `eta beta sqrt(sum_i (sum_{omitted j ~ i} x_j)^2)`.
pub fn omitted_message_mass(
    x: &[f64],
    graph: &Graph,
    active: &ActiveSet,
    cfg: &DynamicsConfig,
) -> f64 {
    let mask = active.mask(graph.edge_count());
    let sq: f64 = (0..graph.node_count())
        .map(|i| {
            let s: f64 = graph
                .neighbors(i)
                .iter()
                .zip(graph.incident_edges(i))
                .filter(|(_, &e)| !mask[e])
                .map(|(&j, _)| x[j])
                .sum();
            s * s
        })
        .sum();
    cfg.eta * cfg.beta * sq.sqrt()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Paired run from `init_state(n, seed)`; routing draws from a stream derived from `seed`.
pub fn paired_trajectory_report(
    graph: &Graph,
    cfg: &DynamicsConfig,
    budget: &BudgetConfig,
    seed: u64,
) -> Result<BoundReport> {
    let init = init_state(graph.node_count(), seed)?;
    paired_trajectory_report_from(graph, cfg, budget, &init, derive_seed(seed, stream::ROUTING, 0), seed)
}

/// Paired run from an explicit shared initial state.
pub fn paired_trajectory_report_from(
    graph: &Graph,
    cfg: &DynamicsConfig,
    budget: &BudgetConfig,
    init: &SolverState,
    routing_seed: u64,
    seed: u64,
) -> Result<BoundReport> {
    cfg.validate()?;
    budget.validate()?;
    init.check_for(graph)?;
    if init.t != 0 || init.x != init.x_prev {
        return Err(LoreError::Usage("paired runs must start from a fresh initial state".into()));
    }
    let lipschitz = lipschitz_bound(graph, cfg);
    let mut router = Router::new(graph, *budget, routing_seed)?;
    let mut counter = EvalCounter::default();
    let mut scratch = EvalCounter::default();
    let mut cache: Option<BathCache> = None;

    let mut reference = init.clone();
    let mut budgeted = init.clone();
    let steps = cfg.steps;
    let mut e = Vec::with_capacity(steps + 1);
    let (mut delta, mut eps_rho, mut r) = (
        Vec::with_capacity(steps),
        Vec::with_capacity(steps),
        Vec::with_capacity(steps),
    );
    let mut violated_steps = Vec::new();
    e.push(0.0);

    for t in 0..steps {
        let ev = router.route(&budgeted, graph, t, &mut counter)?;
        let active = router.current().expect("routed");
        if cfg.recall_enabled && ev.refreshed {
            cache = Some(refresh_bath_cache(&budgeted, graph, active));
        }
        let next_budgeted = budgeted_step(&budgeted, graph, active, cfg, cache.as_ref(), &mut counter)?;
        let full_at_budgeted = full_step(&budgeted, graph, cfg, &mut scratch);
        let next_reference = full_step(&reference, graph, cfg, &mut scratch);

        let d = dist(&next_budgeted.x, &full_at_budgeted.x);
        let recall_shift = if cfg.recall_enabled {
            dist(&next_budgeted.x, &cluster_update(&budgeted.x, active, cfg))
        } else {
            0.0
        };
        let e_next = dist(&next_budgeted.x, &next_reference.x);
        if e_next > lipschitz * e[t] + d + RECURSION_TOL {
            violated_steps.push(t);
        }
        delta.push(d);
        eps_rho.push(omitted_message_mass(&budgeted.x, graph, active, cfg));
        r.push(recall_shift);
        e.push(e_next);
        budgeted = next_budgeted;
        reference = next_reference;
    }

    let unrolled_bound = delta.iter().fold(0.0, |acc, &d| lipschitz * acc + d);
    let unrolled_holds = e[steps] <= unrolled_bound + RECURSION_TOL * (1.0 + unrolled_bound);
    Ok(BoundReport {
        e,
        delta,
        eps_rho,
        r,
        lipschitz,
        violated_steps,
        unrolled_bound,
        unrolled_holds,
        strategy: budget.strategy.name().to_string(),
        rho: budget.rho,
        recall: cfg.recall_enabled,
        seed,
    })
}

fn mean(it: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, c) = it.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (c > 0).then(|| s / c as f64)
}

pub fn activity_stats(x: &[f64], active: &ActiveSet, graph: &Graph, step: usize) -> ActivityStats {
    let mask = active.mask(graph.edge_count());
    let u = |(i, j): (usize, usize)| node_uncertainty(x[i]) * node_uncertainty(x[j]);
    let edges = graph.edges();
    ActivityStats {
        cluster_mean_u: mean(active.edge_ids().iter().map(|&id| u(edges[id]))),
        bath_mean_u: mean(
            edges
                .iter()
                .enumerate()
                .filter(|(id, _)| !mask[*id])
                .map(|(_, &e)| u(e)),
        ),
        step,
    }
}

/// Activity at every step of a budgeted run, measured against the set used at that step.
pub fn activity_trace(
    graph: &Graph,
    cfg: &DynamicsConfig,
    budget: &BudgetConfig,
    seed: u64,
) -> Result<Vec<ActivityStats>> {
    cfg.validate()?;
    let mut state = init_state(graph.node_count(), seed)?;
    let mut router = Router::new(graph, *budget, derive_seed(seed, stream::ROUTING, 0))?;
    let mut counter = EvalCounter::default();
    let mut cache = None;
    let mut out = Vec::with_capacity(cfg.steps);
    for t in 0..cfg.steps {
        let ev = router.route(&state, graph, t, &mut counter)?;
        let active = router.current().expect("routed");
        if cfg.recall_enabled && ev.refreshed {
            cache = Some(refresh_bath_cache(&state, graph, active));
        }
        out.push(activity_stats(&state.x, active, graph, t));
        state = budgeted_step(&state, graph, active, cfg, cache.as_ref(), &mut counter)?;
    }
    Ok(out)
}
