//! Step maps of the conflict-descent MIS relaxation.
//!
//! The update is projected gradient ascent on `sum_i x_i - beta * C(x)`:
//!
//! ```text
//! x_i <- clip01( x_i + eta * (1 - beta * sum_{j ~ i} x_j) )
//! ```
//!
//! The node-wise part is `x_i + eta`; each interaction `(i, j)` contributes
//! `-eta * beta * x_j` to `i` and `-eta * beta * x_i` to `j`. The budgeted map
//! keeps the same expression but sums only over the routed edges.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LoreError, Result};
use crate::graph::Graph;
use crate::recall::{apply_recall, BathCache};
use crate::rng::rng_from_seed;
use crate::routing::ActiveSet;

pub const DEFAULT_ETA: f64 = 0.1;
pub const DEFAULT_BETA: f64 = 2.0;
pub const DEFAULT_STEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub x: Vec<f64>,
    pub x_prev: Vec<f64>,
    pub t: usize,
}

impl SolverState {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn check_for(&self, graph: &Graph) -> Result<()> {
        if self.x.len() != graph.node_count() || self.x_prev.len() != graph.node_count() {
            return Err(LoreError::Usage(format!(
                "state has {} entries, graph has {} nodes",
                self.x.len(),
                graph.node_count()
            )));
        }
        Ok(())
    }

    fn advance(&self, x: Vec<f64>) -> SolverState {
        SolverState {
            x,
            x_prev: self.x.clone(),
            t: self.t + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DynamicsConfig {
    pub eta: f64,
    pub beta: f64,
    pub steps: usize,
    pub recall_enabled: bool,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            eta: DEFAULT_ETA,
            beta: DEFAULT_BETA,
            steps: DEFAULT_STEPS,
            recall_enabled: false,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(LoreError::param(format!("eta must be > 0, got {}", self.eta)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(LoreError::param(format!("beta must be > 0, got {}", self.beta)));
        }
        if self.steps == 0 {
            return Err(LoreError::param("steps must be >= 1"));
        }
        Ok(())
    }
}

/// Running totals of operator work, independent of hardware.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounter {
    /// Node-wise term evaluations.
    pub node_evals: u64,
    /// Directed messages; each evaluated edge costs two.
    pub msg_evals: u64,
    /// Routing proxy-score evaluations.
    pub score_evals: u64,
}

/// Uniform(0.25, 0.75) initialization.
pub fn init_state(n: usize, seed: u64) -> Result<SolverState> {
    if n == 0 {
        return Err(LoreError::param("n must be >= 1"));
    }
    let mut rng = rng_from_seed(seed);
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.25..0.75)).collect();
    Ok(SolverState {
        x_prev: x.clone(),
        x,
        t: 0,
    })
}

#[inline]
pub(crate) fn node_update(xi: f64, pressure: f64, cfg: &DynamicsConfig) -> f64 {
    (xi + cfg.eta * (1.0 - cfg.beta * pressure)).clamp(0.0, 1.0)
}

#[inline]
fn row_sum(x: &[f64], row: &[usize]) -> f64 {
    row.iter().map(|&j| x[j]).sum()
}

/// One step over every edge of the graph.
pub fn full_step(
    state: &SolverState,
    graph: &Graph,
    cfg: &DynamicsConfig,
    counter: &mut EvalCounter,
) -> SolverState {
    let x = &state.x;
    let next = (0..graph.node_count())
        .map(|i| node_update(x[i], row_sum(x, graph.neighbors(i)), cfg))
        .collect();
    counter.node_evals += graph.node_count() as u64;
    counter.msg_evals += 2 * graph.edge_count() as u64;
    state.advance(next)
}

/// Cluster-only update: the interaction sum runs over `active` alone.
pub(crate) fn cluster_update(x: &[f64], active: &ActiveSet, cfg: &DynamicsConfig) -> Vec<f64> {
    (0..x.len())
        .map(|i| node_update(x[i], row_sum(x, active.active_neighbors(i)), cfg))
        .collect()
}

/// One step restricted to the routed set, optionally followed by the recall blend.
///
/// `cache` must be present exactly when `cfg.recall_enabled` is set.
pub fn budgeted_step(
    state: &SolverState,
    graph: &Graph,
    active: &ActiveSet,
    cfg: &DynamicsConfig,
    cache: Option<&BathCache>,
    counter: &mut EvalCounter,
) -> Result<SolverState> {
    if active.node_count() != graph.node_count() {
        return Err(LoreError::Usage("active set was built for a different graph".into()));
    }
    let mut next = cluster_update(&state.x, active, cfg);
    match (cfg.recall_enabled, cache) {
        (true, Some(cache)) => next = apply_recall(&next, state, cache, cfg)?,
        (true, None) => {
            return Err(LoreError::Usage("recall is enabled but no bath cache was supplied".into()))
        }
        (false, Some(_)) => {
            return Err(LoreError::Usage("bath cache supplied while recall is disabled".into()))
        }
        (false, None) => {}
    }
    counter.node_evals += graph.node_count() as u64;
    counter.msg_evals += 2 * active.len() as u64;
    Ok(state.advance(next))
}

/// Soft conflict energy `sum_{(i,j) in E} x_i x_j` over the full edge set.
pub fn conflict_energy(x: &[f64], graph: &Graph) -> f64 {
    graph.edges().iter().map(|&(i, j)| x[i] * x[j]).sum()
}

pub fn objective(x: &[f64]) -> f64 {
    x.iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::ActiveSet;

    fn state(x: &[f64]) -> SolverState {
        SolverState {
            x: x.to_vec(),
            x_prev: x.to_vec(),
            t: 0,
        }
    }

    fn cfg() -> DynamicsConfig {
        DynamicsConfig::default()
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn init_is_in_range_and_deterministic() {
        let s = init_state(500, 9).unwrap();
        assert!(s.x.iter().all(|&v| (0.25..=0.75).contains(&v)));
        assert_eq!(s, init_state(500, 9).unwrap());
        assert_ne!(init_state(100, 1).unwrap().x, init_state(100, 2).unwrap().x);
        assert_eq!(s.x, s.x_prev);
        assert!(init_state(0, 1).is_err());
    }

    #[test]
    fn isolated_node_gains_eta() {
        let g = Graph::empty(1);
        let mut c = EvalCounter::default();
        let next = full_step(&state(&[0.5]), &g, &cfg(), &mut c);
        assert!((next.x[0] - 0.6).abs() < 1e-15);
        assert_eq!(next.x_prev, vec![0.5]);
        assert_eq!(next.t, 1);
        let top = full_step(&state(&[1.0]), &g, &cfg(), &mut c);
        assert_eq!(top.x[0], 1.0);
    }

    #[test]
    fn single_edge_half_is_fixed_point() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mut c = EvalCounter::default();
        let next = full_step(&state(&[0.5, 0.5]), &g, &cfg(), &mut c);
        assert_eq!(next.x, vec![0.5, 0.5]);
        assert_eq!(c.msg_evals, 2);
        assert_eq!(c.node_evals, 2);
    }

    #[test]
    fn budgeted_triangle_with_one_edge() {
        let g = triangle();
        let active = ActiveSet::new(&g, vec![0], vec![], 0).unwrap();
        let mut c = EvalCounter::default();
        let next =
            budgeted_step(&state(&[0.5, 0.5, 0.5]), &g, &active, &cfg(), None, &mut c).unwrap();
        assert!((next.x[0] - 0.5).abs() < 1e-15);
        assert!((next.x[1] - 0.5).abs() < 1e-15);
        assert!((next.x[2] - 0.6).abs() < 1e-15);
        assert_eq!(c.msg_evals, 2);
    }

    #[test]
    fn empty_active_set_drops_all_interactions() {
        let g = triangle();
        let active = ActiveSet::new(&g, vec![], vec![], 0).unwrap();
        let s = state(&[0.3, 0.95, 0.5]);
        let mut c = EvalCounter::default();
        let next = budgeted_step(&s, &g, &active, &cfg(), None, &mut c).unwrap();
        for (a, b) in next.x.iter().zip(&s.x) {
            assert_eq!(*a, (b + 0.1).clamp(0.0, 1.0));
        }
        assert_eq!(c.msg_evals, 0);
    }

    #[test]
    fn full_support_budgeted_equals_full() {
        let g = crate::graph::gen_er(80, 0.1, 5).unwrap();
        let active = ActiveSet::full(&g, 0);
        let s = init_state(80, 5).unwrap();
        let mut c = EvalCounter::default();
        let a = full_step(&s, &g, &cfg(), &mut c);
        let b = budgeted_step(&s, &g, &active, &cfg(), None, &mut c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recall_flag_and_cache_must_agree() {
        let g = triangle();
        let active = ActiveSet::full(&g, 0);
        let s = state(&[0.5; 3]);
        let mut c = EvalCounter::default();
        let on = DynamicsConfig {
            recall_enabled: true,
            ..cfg()
        };
        assert!(matches!(
            budgeted_step(&s, &g, &active, &on, None, &mut c),
            Err(LoreError::Usage(_))
        ));
        let cache = crate::recall::refresh_bath_cache(&s, &g, &active);
        assert!(budgeted_step(&s, &g, &active, &cfg(), Some(&cache), &mut c).is_err());
        assert!(budgeted_step(&s, &g, &active, &on, Some(&cache), &mut c).is_ok());
    }

    #[test]
    fn energy_and_objective() {
        let g = triangle();
        assert!((conflict_energy(&[0.5; 3], &g) - 0.75).abs() < 1e-15);
        assert_eq!(conflict_energy(&[0.0; 3], &g), 0.0);
        assert_eq!(objective(&[0.0; 3]), 0.0);
        assert_eq!(conflict_energy(&[1.0, 0.0, 0.0], &g), 0.0);
    }

    #[test]
    fn binary_independent_set_with_enough_pressure_is_fixed() {
        // path 0-1-2-3-4, set {0, 2, 4}; every excluded node has pressure 2 >= 1/beta
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let x = [1.0, 0.0, 1.0, 0.0, 1.0];
        let mut c = EvalCounter::default();
        assert_eq!(full_step(&state(&x), &g, &cfg(), &mut c).x, x.to_vec());
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(DynamicsConfig { eta: 0.0, ..cfg() }.validate().is_err());
        assert!(DynamicsConfig { beta: -1.0, ..cfg() }.validate().is_err());
        assert!(DynamicsConfig { steps: 0, ..cfg() }.validate().is_err());
    }
}
