//! Low-probability truncation of ditstring tables.
//!
//! Outcomes below a threshold are discarded from the joint table and the
//! survivors renormalized; every marginal is then taken from that single
//! filtered table.

use serde::{Deserialize, Serialize};

use crate::entropy::{mutual_composites, CompositeKind, ProbabilityTable};
use crate::error::{Error, Result};
use crate::hilbert::Partition;

/// Drop entries with `p < p_min` and renormalize. Entries equal to `p_min`
/// are kept.
pub fn filter_probabilities(p: &ProbabilityTable, p_min: f64) -> Result<ProbabilityTable> {
    if !(0.0..=1.0).contains(&p_min) {
        return Err(Error::InvalidParameters(format!(
            "filter level {p_min} outside [0, 1]"
        )));
    }
    let kept: Vec<f64> = p
        .probs()
        .iter()
        .map(|&x| if x < p_min { 0.0 } else { x })
        .collect();
    if kept.iter().all(|&x| x == 0.0) {
        return Err(Error::EmptyTable);
    }
    ProbabilityTable::from_weights(p.num_sites(), p.local_dim(), kept)
}

/// A composite evaluated on a filtered table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilteredValue {
    /// Zero when every outcome was removed.
    pub value: f64,
    pub survivors: usize,
    pub empty: bool,
}

pub fn filtered_composite(
    p: &ProbabilityTable,
    partition: &Partition,
    p_min: f64,
    quantity: CompositeKind,
) -> Result<FilteredValue> {
    match filter_probabilities(p, p_min) {
        Ok(filtered) => Ok(FilteredValue {
            value: quantity.pick(&mutual_composites(&filtered, partition)?),
            survivors: filtered.support(),
            empty: false,
        }),
        Err(Error::EmptyTable) => Ok(FilteredValue {
            value: 0.0,
            survivors: 0,
            empty: true,
        }),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSweep {
    pub levels: Vec<f64>,
    pub values: Vec<f64>,
    pub survivors: Vec<usize>,
    pub empty: Vec<bool>,
}

impl FilterSweep {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// `count` levels spaced evenly in `log10` from `lo` to `hi` inclusive.
pub fn log_levels(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo) || count < 2 {
        return Err(Error::InvalidGrid(format!(
            "need 0 < lo < hi and at least 2 levels, got lo={lo} hi={hi} count={count}"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..count)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64))
        .collect())
}

/// 60 levels from `1e-8` to `1`.
pub fn default_levels() -> Vec<f64> {
    log_levels(1e-8, 1.0, 60).expect("valid default grid")
}

pub fn filter_sweep(
    p: &ProbabilityTable,
    partition: &Partition,
    quantity: CompositeKind,
    levels: &[f64],
) -> Result<FilterSweep> {
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "filter levels must be strictly increasing".into(),
        ));
    }
    let points = levels
        .iter()
        .map(|&level| filtered_composite(p, partition, level, quantity))
        .collect::<Result<Vec<_>>>()?;
    Ok(FilterSweep {
        levels: levels.to_vec(),
        values: points.iter().map(|v| v.value).collect(),
        survivors: points.iter().map(|v| v.survivors).collect(),
        empty: points.iter().map(|v| v.empty).collect(),
    })
}
