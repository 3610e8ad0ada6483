//! Hidden-label oracles for desk-scale validation. These read the sidecar
//! label file that travels next to a wild dataset and are the only code
//! allowed to do so; the discrepancy engine itself never sees wild ground
//! truth.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, SidecarLabels};
use crate::engine::{IntervalScheme, IntervalStatus, SudoReport};
use crate::error::{Error, Result};
use crate::metrics::rank_correlation;

/// True class mixture of each probability interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalContamination {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// Fraction of records whose hidden label is class 1.
    pub proportion_positive: f64,
    /// Fraction per hidden class (length = sidecar class count).
    pub class_proportions: Vec<f64>,
}

impl IntervalContamination {
    /// Largest single-class share; 1.0 means a pure interval.
    pub fn purity(&self) -> f64 {
        self.class_proportions.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContaminationProfile {
    pub intervals: Vec<IntervalContamination>,
}

/// Exact per-interval class mixtures from the sidecar labels.
pub fn contamination_profile(
    wild: &Dataset,
    hidden: &SidecarLabels,
    intervals: &IntervalScheme,
) -> Result<ContaminationProfile> {
    let classes = hidden.class_count().max(2);
    let mut counts = vec![vec![0usize; classes]; intervals.len()];
    for record in wild.records() {
        let p = record.p.ok_or_else(|| Error::MissingProbability {
            id: record.id.clone(),
            role: "wild".into(),
        })?;
        let label = hidden
            .get(&record.id)
            .ok_or_else(|| Error::MissingHiddenLabel {
                id: record.id.clone(),
            })?;
        if let Some(idx) = intervals.locate(p) {
            counts[idx][label] += 1;
        }
    }
    let intervals = counts
        .into_iter()
        .enumerate()
        .map(|(index, by_class)| {
            let (lo, hi) = intervals.bounds(index);
            let total: usize = by_class.iter().sum();
            let proportions: Vec<f64> = if total == 0 {
                vec![0.0; by_class.len()]
            } else {
                by_class.iter().map(|&c| c as f64 / total as f64).collect()
            };
            IntervalContamination {
                index,
                lo,
                hi,
                count: total,
                proportion_positive: proportions.get(1).copied().unwrap_or(0.0),
                class_proportions: proportions,
            }
        })
        .collect();
    Ok(ContaminationProfile { intervals })
}

/// Outcome of checking a report's discrepancies against the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCheck {
    pub rho: f64,
    pub bound: f64,
    pub pass: bool,
    pub intervals_used: usize,
}

/// Spearman correlation between per-interval sudo and the oracle proportion
/// of positives, over intervals evaluated by the report and populated in
/// the profile. Passes when `rho <= bound`: the engine's sign convention
/// makes true-negative-dominated intervals score positive, so a working run
/// anti-correlates with the positive share.
pub fn validate_correlation(
    report: &SudoReport,
    profile: &ContaminationProfile,
    bound: f64,
) -> Result<CorrelationCheck> {
    if profile.intervals.len() != report.intervals.len() {
        return Err(Error::MisalignedIntervals);
    }
    for (r, p) in report.intervals.iter().zip(&profile.intervals) {
        if !crate::engine::edges_match(r.lo, p.lo) || !crate::engine::edges_match(r.hi, p.hi) {
            return Err(Error::MisalignedIntervals);
        }
    }
    let mut sudo = Vec::new();
    let mut oracle = Vec::new();
    for (r, p) in report.intervals.iter().zip(&profile.intervals) {
        if r.status != IntervalStatus::Evaluated || p.count == 0 {
            continue;
        }
        sudo.push(r.detail.as_ref().expect("evaluated").sudo);
        oracle.push(p.proportion_positive);
    }
    let rho = rank_correlation(&sudo, &oracle)?;
    Ok(CorrelationCheck {
        rho,
        bound,
        pass: rho <= bound,
        intervals_used: sudo.len(),
    })
}
