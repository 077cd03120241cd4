use serde::{Deserialize, Serialize};

use crate::dynamics::EvalCounter;

/// One row of a trajectory trace.
///
/// State metrics (`energy`, `objective`, `legal_size`) describe `x^t`; routing
/// fields (`m_size`, `overlap`, `msg_evals`) describe the step that starts at
/// `t`, so the row for `t = T` carries zeros there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub run_id: String,
    pub t: usize,
    pub energy: f64,
    pub objective: f64,
    pub legal_size: usize,
    pub m_size: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub overlap: Option<f64>,
    pub msg_evals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub axis: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: String,
    pub graph_id: String,
    pub graph_index: usize,
    pub family: String,
    pub n: usize,
    pub edges: usize,
    /// Strategy name, or `"full"` for a full-support reference run.
    pub strategy: String,
    pub seed: u64,
    pub config_hash: String,
    pub prng_id: String,
    pub operator_version: String,
    pub grid: Option<GridPoint>,
    pub steps: Vec<StepRecord>,
    pub final_size: usize,
    pub final_energy: f64,
    pub totals: EvalCounter,
    pub retention: Option<f64>,
    /// Empty on success, otherwise the failure message.
    pub error: Option<String>,
    pub initial_state: Vec<f64>,
}

impl RunRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn is_reference(&self) -> bool {
        self.strategy == "full"
    }
}

/// Flat CSV row derived from a [`RunRecord`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub run_id: String,
    pub graph_id: String,
    pub family: String,
    pub n: usize,
    pub edges: usize,
    pub strategy: String,
    pub seed: u64,
    pub grid_axis: String,
    pub grid_value: Option<f64>,
    pub status: String,
    pub final_size: usize,
    pub final_energy: f64,
    pub node_evals: u64,
    pub msg_evals: u64,
    pub score_evals: u64,
    pub retention: Option<f64>,
    pub config_hash: String,
    pub operator_version: String,
}

impl From<&RunRecord> for SummaryRow {
    fn from(r: &RunRecord) -> Self {
        SummaryRow {
            run_id: r.run_id.clone(),
            graph_id: r.graph_id.clone(),
            family: r.family.clone(),
            n: r.n,
            edges: r.edges,
            strategy: r.strategy.clone(),
            seed: r.seed,
            grid_axis: r.grid.as_ref().map(|g| g.axis.clone()).unwrap_or_default(),
            grid_value: r.grid.as_ref().map(|g| g.value),
            status: match &r.error {
                None => "ok".into(),
                Some(e) => format!("failed: {e}"),
            },
            final_size: r.final_size,
            final_energy: r.final_energy,
            node_evals: r.totals.node_evals,
            msg_evals: r.totals.msg_evals,
            score_evals: r.totals.score_evals,
            retention: r.retention,
            config_hash: r.config_hash.clone(),
            operator_version: r.operator_version.clone(),
        }
    }
}
