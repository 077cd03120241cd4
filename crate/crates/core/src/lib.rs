//! Per-step interaction budgeting for iterative graph solvers.
//!
//! A step of an iterative relaxation normally aggregates over every edge. Here
//! each step evaluates only a routed subset `M_t` of at most `max(floor(rho |E|), 1)`
//! edges: a fixed skeleton of high-degree edges plus hotspots ranked by endpoint
//! uncertainty and recent movement, re-selected every `R` steps. The omitted
//! edges can optionally be recalled through a cached pressure term.
//!
//! The backend is a training-free conflict-descent relaxation for Maximum
//! Independent Set. Modules:
//!
//! * [`graph`]: graphs, ER/BA/WS generators, edge-list files, spectral bounds
//! * [`dynamics`]: full and budgeted step maps, energy, evaluation counters
//! * [`routing`]: edge scores, skeleton, the six routing strategies
//! * [`recall`]: cached bath pressure and the coverage-weighted blend
//! * [`decode`]: greedy decode and repair
//! * [`bound`]: paired-trajectory error recursion and activity statistics
//! * [`harness`]: ablations, sweeps and output files

pub mod bound;
pub mod decode;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod harness;
pub mod recall;
pub mod rng;
pub mod routing;

pub use bound::{
    activity_stats, activity_trace, lipschitz_bound, paired_trajectory_report, ActivityStats,
    BoundReport,
};
pub use decode::{greedy_decode, is_independent, repair_and_validate, NodeSet, OPERATOR_VERSION};
pub use dynamics::{
    budgeted_step, conflict_energy, full_step, init_state, objective, DynamicsConfig, EvalCounter,
    SolverState,
};
pub use error::{LoreError, Result};
pub use graph::{gen_ba, gen_er, gen_ws, EdgeId, Family, GeneratorSpec, Graph, NodeId};
pub use harness::{run_ablation, run_sweep, ExperimentSpec, RunRecord, Support};
pub use recall::{apply_recall, refresh_bath_cache, BathCache};
pub use routing::{build_active_set, overlap_fraction, ActiveSet, BudgetConfig, Router, Strategy};
