//! Optional recall of the omitted ("bath") interactions.
//!
//! At every refresh the omitted-neighbor pressure `s_hat_i = sum_{j: (i,j) not routed} x_j`
//! and the coverage `alpha_i = d_i(M) / d_i(E)` are cached. Between refreshes the
//! cache is reused as is. The blend is
//!
//! ```text
//! out_i = alpha_i * cluster_i + (1 - alpha_i) * g_i
//! g_i   = clip01( x_i + eta * (1 - beta * s_hat_i * d_i(E) / max(d_i(E) - d_i(M), 1)) )
//! ```

use crate::dynamics::{node_update, DynamicsConfig, SolverState};
use crate::error::{LoreError, Result};
use crate::graph::Graph;
use crate::routing::ActiveSet;

#[derive(Debug, Clone, PartialEq)]
pub struct BathCache {
    pub s_hat: Vec<f64>,
    pub alpha: Vec<f64>,
    /// Full degree over omitted degree (at least 1 in the denominator).
    pub scale: Vec<f64>,
    pub refreshed_at: usize,
}

pub fn refresh_bath_cache(state: &SolverState, graph: &Graph, active: &ActiveSet) -> BathCache {
    let n = graph.node_count();
    let mask = active.mask(graph.edge_count());
    let mut s_hat = vec![0.0; n];
    let mut alpha = vec![1.0; n];
    let mut scale = vec![1.0; n];
    for v in 0..n {
        let full = graph.degree(v);
        if full == 0 {
            continue;
        }
        let mut omitted = 0usize;
        let mut pressure = 0.0;
        for (&w, &e) in graph.neighbors(v).iter().zip(graph.incident_edges(v)) {
            if !mask[e] {
                omitted += 1;
                pressure += state.x[w];
            }
        }
        s_hat[v] = pressure;
        alpha[v] = (full - omitted) as f64 / full as f64;
        scale[v] = full as f64 / omitted.max(1) as f64;
    }
    BathCache {
        s_hat,
        alpha,
        scale,
        refreshed_at: state.t,
    }
}

/// Bath-driven node update `g_i` from cached pressure.
pub fn bath_signal(state: &SolverState, cache: &BathCache, cfg: &DynamicsConfig) -> Vec<f64> {
    state
        .x
        .iter()
        .enumerate()
        .map(|(i, &xi)| node_update(xi, cache.s_hat[i] * cache.scale[i], cfg))
        .collect()
}

pub fn apply_recall(
    cluster_update: &[f64],
    state: &SolverState,
    cache: &BathCache,
    cfg: &DynamicsConfig,
) -> Result<Vec<f64>> {
    let n = cluster_update.len();
    if state.x.len() != n || cache.alpha.len() != n || cache.s_hat.len() != n {
        return Err(LoreError::Usage(format!(
            "recall shape mismatch: update {n}, state {}, cache {}",
            state.x.len(),
            cache.alpha.len()
        )));
    }
    if cache.refreshed_at > state.t {
        return Err(LoreError::Usage("bath cache is newer than the state".into()));
    }
    let g = bath_signal(state, cache, cfg);
    Ok(blend(cluster_update, &g, &cache.alpha))
}

/// Coverage-weighted interpolation, clipped to `[0, 1]`.
pub fn blend(cluster_update: &[f64], bath: &[f64], alpha: &[f64]) -> Vec<f64> {
    cluster_update
        .iter()
        .zip(bath)
        .zip(alpha)
        .map(|((&c, &g), &a)| {
            if a == 1.0 {
                c
            } else {
                (a * c + (1.0 - a) * g).clamp(0.0, 1.0)
            }
        })
        .collect()
}
