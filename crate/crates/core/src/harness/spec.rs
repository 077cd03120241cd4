use serde::{Deserialize, Serialize};

use crate::dynamics::DynamicsConfig;
use crate::error::{LoreError, Result};
use crate::graph::Family;
use crate::routing::{BudgetConfig, Strategy};

/// `count` instances of one family at one size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSet {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Rho,
    Refresh,
    Gamma,
    LambdaStab,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Rho => "rho",
            SweepAxis::Refresh => "refresh",
            SweepAxis::Gamma => "gamma",
            SweepAxis::LambdaStab => "lambda_stab",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(&self, base: &BudgetConfig, value: f64) -> Result<BudgetConfig> {
        let mut cfg = *base;
        match self {
            SweepAxis::Rho => cfg.rho = value,
            SweepAxis::Gamma => cfg.gamma = value,
            SweepAxis::LambdaStab => cfg.lambda_stab = value,
            SweepAxis::Refresh => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(LoreError::param(format!(
                        "refresh grid values must be integers >= 1, got {value}"
                    )));
                }
                cfg.refresh = value as usize;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSpec {
    pub graphs: Vec<GraphSet>,
    pub dynamics: DynamicsConfig,
    /// Base routing configuration; ablations override `strategy`, sweeps one axis.
    pub budget: BudgetConfig,
    pub strategies: Vec<Strategy>,
    pub sweeps: Vec<SweepGrid>,
    pub master_seed: u64,
}

impl Default for ExperimentSpec {
    /// The controlled routing ablation: 10 instances each of ER(p = 0.05) and
    /// BA(m = 3) at n = 500 and n = 1000, all six strategies, T = 100, rho = 0.08.
    fn default() -> Self {
        let er = Family::Er { p: 0.05 };
        let ba = Family::Ba { m: 3 };
        ExperimentSpec {
            graphs: vec![
                GraphSet { family: er, n: 500, count: 10 },
                GraphSet { family: er, n: 1000, count: 10 },
                GraphSet { family: ba, n: 500, count: 10 },
                GraphSet { family: ba, n: 1000, count: 10 },
            ],
            dynamics: DynamicsConfig::default(),
            budget: BudgetConfig::default(),
            strategies: Strategy::ALL.to_vec(),
            sweeps: Vec::new(),
            master_seed: 0,
        }
    }
}

impl ExperimentSpec {
    /// Sensitivity sweep over `lambda_stab` on three ER(n = 500, p = 0.05) graphs.
    pub fn default_sweep() -> Self {
        ExperimentSpec {
            graphs: vec![GraphSet {
                family: Family::Er { p: 0.05 },
                n: 500,
                count: 3,
            }],
            strategies: vec![Strategy::Lore],
            sweeps: vec![SweepGrid {
                axis: SweepAxis::LambdaStab,
                values: vec![0.0, 0.25, 0.5, 1.0, 2.0, 5.0],
            }],
            ..ExperimentSpec::default()
        }
    }

    pub fn instance_count(&self) -> usize {
        self.graphs.iter().map(|g| g.count).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.instance_count() == 0 {
            return Err(LoreError::param("experiment needs at least one graph"));
        }
        if self.strategies.is_empty() {
            return Err(LoreError::param("experiment needs at least one strategy"));
        }
        self.dynamics.validate()?;
        self.budget.validate()?;
        let mut axes: Vec<SweepAxis> = self.sweeps.iter().map(|s| s.axis).collect();
        axes.sort();
        if axes.windows(2).any(|w| w[0] == w[1]) {
            return Err(LoreError::param("each sweep axis may have only one grid"));
        }
        for grid in &self.sweeps {
            if grid.values.is_empty() {
                return Err(LoreError::param(format!("empty grid for {}", grid.axis.name())));
            }
            for &v in &grid.values {
                grid.axis.apply(&self.budget, v)?;
            }
        }
        Ok(())
    }
}
