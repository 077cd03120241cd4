//! Shared fixtures for the step benchmarks.

use lore_core::{gen_er, init_state, BudgetConfig, EvalCounter, Graph, Router, SolverState};

pub struct Fixture {
    pub graph: Graph,
    pub state: SolverState,
    pub router: Router,
}

/// ER(n, p) with a random initial state and a router that has already
/// selected its first support at `rho`.
pub fn fixture(n: usize, p: f64, rho: f64) -> Fixture {
    let graph = gen_er(n, p, 7).expect("valid generator parameters");
    let state = init_state(n, 11).expect("n > 0");
    let budget = BudgetConfig { rho, ..BudgetConfig::default() };
    let mut router = Router::new(&graph, budget, 13).expect("valid budget");
    router
        .route(&state, &graph, 0, &mut EvalCounter::default())
        .expect("routing at t = 0");
    Fixture { graph, state, router }
}
