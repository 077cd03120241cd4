//! Experiment orchestration: shared-initialization ablations, sensitivity
//! sweeps against full-support references, and trace/summary emission.
//!
//! Cost is reported as interaction-evaluation counts. Cells run in parallel on
//! the ambient rayon pool and are returned in a fixed order (graph, strategy,
//! grid point), so outputs depend only on the experiment configuration.

mod output;
mod record;
mod spec;
pub mod stats;

pub use output::{emit_outputs, read_trace, OutputPaths};
pub use record::{GridPoint, RunRecord, StepRecord, SummaryRow};
pub use spec::{ExperimentSpec, GraphSet, SweepAxis, SweepGrid};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::decode::{legal_set, OPERATOR_VERSION};
use crate::dynamics::{
    budgeted_step, conflict_energy, full_step, init_state, objective, DynamicsConfig, EvalCounter,
    SolverState,
};
use crate::error::Result;
use crate::graph::{GeneratorSpec, Graph};
use crate::recall::refresh_bath_cache;
use crate::rng::{derive_seed, stream, PRNG_ID};
use crate::routing::{BudgetConfig, Router, Strategy};

/// Which operator a trajectory applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "support", rename_all = "lowercase")]
pub enum Support {
    Full,
    Budgeted(BudgetConfig),
}

impl Support {
    pub fn label(&self) -> String {
        match self {
            Support::Full => "full".into(),
            Support::Budgeted(b) => b.strategy.name().into(),
        }
    }
}

/// A generated graph with its shared initial state and routing seed.
#[derive(Debug, Clone)]
pub struct Instance {
    pub index: usize,
    pub graph_id: String,
    pub family: String,
    pub seed: u64,
    pub graph: Graph,
    pub init: SolverState,
    pub routing_seed: u64,
}

impl Instance {
    /// Wraps an existing graph; seeds derive from `(master_seed, index)`.
    pub fn from_graph(graph: Graph, graph_id: &str, family: &str, index: usize, master_seed: u64) -> Result<Self> {
        let init = init_state(graph.node_count(), derive_seed(master_seed, stream::INIT, index as u64))?;
        Ok(Instance {
            index,
            graph_id: graph_id.to_string(),
            family: family.to_string(),
            seed: master_seed,
            graph,
            init,
            routing_seed: derive_seed(master_seed, stream::ROUTING, index as u64),
        })
    }
}

/// Generates every instance of `spec` in declaration order.
pub fn prepare_instances(spec: &ExperimentSpec) -> Result<Vec<Instance>> {
    let mut plan = Vec::with_capacity(spec.instance_count());
    for set in &spec.graphs {
        for _ in 0..set.count {
            let index = plan.len();
            let gen = GeneratorSpec {
                family: set.family,
                n: set.n,
                seed: derive_seed(spec.master_seed, stream::GRAPH, index as u64),
            };
            plan.push((index, gen));
        }
    }
    plan.into_par_iter()
        .map(|(index, gen)| {
            let graph = gen.generate()?;
            let graph_id = format!("g{index:03}-{}-n{}", gen.family.tag(), gen.n);
            let mut inst = Instance::from_graph(graph, &graph_id, gen.family.tag(), index, spec.master_seed)?;
            inst.seed = gen.seed;
            Ok(inst)
        })
        .collect()
}

fn config_hash(inst: &Instance, dynamics: &DynamicsConfig, support: &Support) -> String {
    #[derive(Serialize)]
    struct Key<'a> {
        graph_id: &'a str,
        graph_seed: u64,
        routing_seed: u64,
        dynamics: &'a DynamicsConfig,
        support: &'a Support,
    }
    let key = Key {
        graph_id: &inst.graph_id,
        graph_seed: inst.seed,
        routing_seed: inst.routing_seed,
        dynamics,
        support,
    };
    let bytes = serde_json::to_vec(&key).expect("config key serializes");
    hex::encode(&Sha256::digest(&bytes)[..8])
}

/// Output of one trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
    pub totals: EvalCounter,
    pub final_state: SolverState,
}

/// Advances one trajectory for `dynamics.steps` steps, recording every state.
pub fn run_trajectory(
    graph: &Graph,
    dynamics: &DynamicsConfig,
    support: &Support,
    init: &SolverState,
    routing_seed: u64,
    run_id: &str,
) -> Result<Trajectory> {
    dynamics.validate()?;
    init.check_for(graph)?;
    let mut router = match support {
        Support::Full => None,
        Support::Budgeted(b) => Some(Router::new(graph, *b, routing_seed)?),
    };
    let mut counter = EvalCounter::default();
    let mut cache = None;
    let mut state = init.clone();
    let mut steps = Vec::with_capacity(dynamics.steps + 1);
    let row = |state: &SolverState, m_size, overlap, msg_evals| StepRecord {
        run_id: run_id.to_string(),
        t: state.t,
        energy: conflict_energy(&state.x, graph),
        objective: objective(&state.x),
        legal_size: legal_set(&state.x, graph).size(),
        m_size,
        overlap,
        msg_evals,
    };
    for t in 0..dynamics.steps {
        let before = counter.msg_evals;
        let (next, m_size, overlap) = match router.as_mut() {
            None => (full_step(&state, graph, dynamics, &mut counter), graph.edge_count(), None),
            Some(router) => {
                let ev = router.route(&state, graph, t, &mut counter)?;
                let active = router.current().expect("routed");
                if dynamics.recall_enabled && ev.refreshed {
                    cache = Some(refresh_bath_cache(&state, graph, active));
                }
                let next = budgeted_step(&state, graph, active, dynamics, cache.as_ref(), &mut counter)?;
                (next, active.len(), ev.overlap)
            }
        };
        steps.push(row(&state, m_size, overlap, counter.msg_evals - before));
        state = next;
    }
    steps.push(row(&state, 0, None, 0));
    Ok(Trajectory {
        steps,
        totals: counter,
        final_state: state,
    })
}

/// Runs one cell; failures are captured in the record instead of propagated.
pub fn run_cell(
    inst: &Instance,
    dynamics: &DynamicsConfig,
    support: &Support,
    grid: Option<GridPoint>,
) -> RunRecord {
    let mut run_id = format!("{}/{}", inst.graph_id, support.label());
    if let Some(g) = &grid {
        run_id.push_str(&format!("/{}={}", g.axis, g.value));
    }
    let mut record = RunRecord {
        run_id: run_id.clone(),
        graph_id: inst.graph_id.clone(),
        graph_index: inst.index,
        family: inst.family.clone(),
        n: inst.graph.node_count(),
        edges: inst.graph.edge_count(),
        strategy: support.label(),
        seed: inst.seed,
        config_hash: config_hash(inst, dynamics, support),
        prng_id: PRNG_ID.to_string(),
        operator_version: OPERATOR_VERSION.to_string(),
        grid,
        steps: Vec::new(),
        final_size: 0,
        final_energy: 0.0,
        totals: EvalCounter::default(),
        retention: None,
        error: None,
        initial_state: inst.init.x.clone(),
    };
    let started = std::time::Instant::now();
    match run_trajectory(&inst.graph, dynamics, support, &inst.init, inst.routing_seed, &run_id) {
        Ok(traj) => {
            let last = traj.steps.last().expect("at least the initial row");
            record.final_size = last.legal_size;
            record.final_energy = last.energy;
            record.totals = traj.totals;
            record.steps = traj.steps;
        }
        Err(e) => {
            log::warn!("{run_id} failed: {e}");
            record.error = Some(e.to_string());
        }
    }
    log::debug!("{run_id} finished in {:.3}s", started.elapsed().as_secs_f64());
    record
}

/// Every strategy on every instance, all from the instance's shared initial state.
pub fn run_ablation(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let instances = prepare_instances(spec)?;
    let cells: Vec<(&Instance, Strategy)> = instances
        .iter()
        .flat_map(|inst| spec.strategies.iter().map(move |&s| (inst, s)))
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(inst, strategy)| {
            let budget = BudgetConfig { strategy, ..spec.budget };
            run_cell(inst, &spec.dynamics, &Support::Budgeted(budget), None)
        })
        .collect())
}

/// One-axis-at-a-time sweeps. Each instance gets one full-support reference
/// run, and every budgeted cell's retention is its final legal size over the
/// reference's. Cells use `spec.budget.strategy`.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let instances = prepare_instances(spec)?;
    let mut cells: Vec<(&Instance, Support, Option<GridPoint>)> = Vec::new();
    for inst in &instances {
        cells.push((inst, Support::Full, None));
        for grid in &spec.sweeps {
            for &value in &grid.values {
                let budget = grid.axis.apply(&spec.budget, value)?;
                let point = GridPoint {
                    axis: grid.axis.name().to_string(),
                    value,
                };
                cells.push((inst, Support::Budgeted(budget), Some(point)));
            }
        }
    }
    let mut records: Vec<RunRecord> = cells
        .into_par_iter()
        .map(|(inst, support, grid)| run_cell(inst, &spec.dynamics, &support, grid))
        .collect();
    let reference: Vec<Option<usize>> = {
        let mut r = vec![None; instances.len()];
        for rec in records.iter().filter(|r| r.is_reference() && r.is_ok()) {
            r[rec.graph_index] = Some(rec.final_size);
        }
        r
    };
    for rec in records.iter_mut().filter(|r| !r.is_reference() && r.is_ok()) {
        if let Some(full) = reference[rec.graph_index] {
            rec.retention = Some(rec.final_size as f64 / full as f64);
        }
    }
    Ok(records)
}
