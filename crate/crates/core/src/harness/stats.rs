//! Small summary statistics used to read ablation and sweep results.

use std::collections::BTreeMap;

use serde::Serialize;

use super::record::RunRecord;

/// Paired one-sided sign test of `a > b`. Ties are discarded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignTest {
    pub wins: usize,
    pub losses: usize,
    pub ties: usize,
    /// `P(X >= wins)` for `X ~ Binomial(wins + losses, 1/2)`.
    pub p_value: f64,
}

pub fn sign_test_greater(a: &[f64], b: &[f64]) -> SignTest {
    assert_eq!(a.len(), b.len(), "sign test needs paired samples");
    let (mut wins, mut losses, mut ties) = (0, 0, 0);
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Greater) => wins += 1,
            Some(std::cmp::Ordering::Less) => losses += 1,
            _ => ties += 1,
        }
    }
    SignTest {
        wins,
        losses,
        ties,
        p_value: binomial_upper_tail(wins + losses, wins),
    }
}

/// `P(X >= k)` for `X ~ Binomial(n, 1/2)`.
pub fn binomial_upper_tail(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    // log C(n, i) accumulated incrementally to stay finite for large n
    let mut log_c = 0.0f64;
    let mut total = 0.0;
    let ln_half_n = n as f64 * 0.5f64.ln();
    for i in 0..=n {
        if i > 0 {
            log_c += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        if i >= k {
            total += (log_c + ln_half_n).exp();
        }
    }
    total.min(1.0)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRetention {
    pub axis: String,
    pub value: f64,
    pub mean_retention: f64,
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisRange {
    pub axis: String,
    /// `(max - min)` of per-value mean retention, in percentage points.
    pub range_pp: f64,
    pub points: Vec<GridRetention>,
}

/// Mean retention per grid value and its spread, per sweep axis.
pub fn retention_ranges(records: &[RunRecord]) -> Vec<AxisRange> {
    let mut by_axis: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in records {
        if let (Some(g), Some(ret)) = (&r.grid, r.retention) {
            by_axis.entry(g.axis.clone()).or_default().push((g.value, ret));
        }
    }
    by_axis
        .into_iter()
        .map(|(axis, cells)| {
            let mut values: Vec<f64> = cells.iter().map(|c| c.0).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            let points: Vec<GridRetention> = values
                .into_iter()
                .map(|v| {
                    let rets: Vec<f64> = cells.iter().filter(|c| c.0 == v).map(|c| c.1).collect();
                    GridRetention {
                        axis: axis.clone(),
                        value: v,
                        mean_retention: mean(&rets),
                        cells: rets.len(),
                    }
                })
                .collect();
            let hi = points.iter().map(|p| p.mean_retention).fold(f64::MIN, f64::max);
            let lo = points.iter().map(|p| p.mean_retention).fold(f64::MAX, f64::min);
            AxisRange {
                axis,
                range_pp: 100.0 * (hi - lo),
                points,
            }
        })
        .collect()
}

/// Mean refresh overlap in the first and last quarter of the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapPhases {
    pub early_mean: Option<f64>,
    pub late_mean: Option<f64>,
    pub early_count: usize,
    pub late_count: usize,
}

pub fn overlap_phases<'a>(records: impl IntoIterator<Item = &'a RunRecord>, horizon: usize) -> OverlapPhases {
    let quarter = horizon as f64 / 4.0;
    let (mut early, mut late) = (Vec::new(), Vec::new());
    for r in records {
        for s in &r.steps {
            if let Some(o) = s.overlap {
                if (s.t as f64) < quarter {
                    early.push(o);
                } else if s.t as f64 >= horizon as f64 - quarter {
                    late.push(o);
                }
            }
        }
    }
    OverlapPhases {
        early_mean: (!early.is_empty()).then(|| mean(&early)),
        late_mean: (!late.is_empty()).then(|| mean(&late)),
        early_count: early.len(),
        late_count: late.len(),
    }
}
