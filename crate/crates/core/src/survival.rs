//! Kaplan-Meier survival estimation and discrepancy-versus-survival
//! validation: product-limit curves for probability-range cohorts of the
//! wild data, and rank correlation of per-interval median survival with the
//! per-interval discrepancy.
//!
//! Conventions: at tied times deaths are processed before censorings
//! (censored records stay in the risk set at their own time), and the median
//! is the smallest event time where the curve reaches 0.5 or below.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::engine::{IntervalScheme, SudoReport};
use crate::error::{Error, Result};
use crate::metrics::rank_correlation;

/// A product-limit step function over the distinct event (death) times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub event_times: Vec<f64>,
    /// S(t) immediately after each event time.
    pub survival_prob: Vec<f64>,
    /// Risk-set size at each event time.
    pub at_risk: Vec<usize>,
    /// Deaths at each event time.
    pub events: Vec<usize>,
    pub subjects: usize,
    /// Smallest event time with S(t) <= 0.5; absent when S never gets there.
    pub median: Option<f64>,
}

impl SurvivalCurve {
    /// Step-function value at time `t` (S(0) = 1).
    pub fn survival_at(&self, t: f64) -> f64 {
        match self.event_times.partition_point(|&e| e <= t) {
            0 => 1.0,
            i => self.survival_prob[i - 1],
        }
    }
}

/// Kaplan-Meier estimate from (time, event) pairs; `event` true means the
/// death was observed, false means right-censoring at that time.
pub fn kaplan_meier(times: &[f64], events: &[bool]) -> Result<SurvivalCurve> {
    if times.is_empty() {
        return Err(Error::EmptySurvivalInput);
    }
    if times.len() != events.len() {
        return Err(Error::LengthMismatch {
            left: times.len(),
            right: events.len(),
        });
    }
    if let Some(&t) = times.iter().find(|&&t| t < 0.0 || !t.is_finite()) {
        return Err(Error::NegativeSurvivalTime(t));
    }

    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].partial_cmp(&times[b]).unwrap());

    let mut event_times = Vec::new();
    let mut survival_prob = Vec::new();
    let mut at_risk_out = Vec::new();
    let mut events_out = Vec::new();

    let mut at_risk = times.len();
    let mut survival = 1.0;
    let mut i = 0;
    while i < order.len() {
        let t = times[order[i]];
        let mut deaths = 0;
        let mut leaving = 0;
        while i < order.len() && times[order[i]] == t {
            if events[order[i]] {
                deaths += 1;
            }
            leaving += 1;
            i += 1;
        }
        if deaths > 0 {
            survival *= 1.0 - deaths as f64 / at_risk as f64;
            event_times.push(t);
            survival_prob.push(survival);
            at_risk_out.push(at_risk);
            events_out.push(deaths);
        }
        at_risk -= leaving;
    }

    let median = event_times
        .iter()
        .zip(&survival_prob)
        .find(|(_, &s)| s <= 0.5)
        .map(|(&t, _)| t);

    Ok(SurvivalCurve {
        event_times,
        survival_prob,
        at_risk: at_risk_out,
        events: events_out,
        subjects: times.len(),
        median,
    })
}

/// A labelled probability range `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

impl Stratum {
    pub fn contains(&self, p: f64) -> bool {
        p > self.lo && p <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratifiedSurvival {
    /// One curve per stratum, `None` when the stratum matched no records.
    pub curves: Vec<(String, Option<SurvivalCurve>)>,
    /// Records lacking survival fields or a probability.
    pub skipped_records: usize,
    pub warnings: Vec<String>,
}

fn survival_inputs(dataset: &Dataset) -> Vec<(f64, f64, bool)> {
    dataset
        .records()
        .iter()
        .filter_map(|r| match (r.p, r.survival_time, r.event) {
            (Some(p), Some(t), Some(e)) => Some((p, t, e)),
            _ => None,
        })
        .collect()
}

/// One Kaplan-Meier curve per probability stratum.
pub fn stratified_survival(dataset: &Dataset, strata: &[Stratum]) -> Result<StratifiedSurvival> {
    if strata.is_empty() {
        return Err(Error::InvalidStrata("no strata given".into()));
    }
    for s in strata {
        if s.lo >= s.hi || !(0.0..=1.0).contains(&s.lo) || !(0.0..=1.0).contains(&s.hi) {
            return Err(Error::InvalidStrata(format!(
                "bad range ({}, {}] for {:?}",
                s.lo, s.hi, s.label
            )));
        }
    }
    for (i, a) in strata.iter().enumerate() {
        for b in strata.iter().skip(i + 1) {
            if a.lo < b.hi && b.lo < a.hi {
                return Err(Error::InvalidStrata(format!(
                    "{:?} overlaps {:?}",
                    a.label, b.label
                )));
            }
        }
    }

    let rows = survival_inputs(dataset);
    let skipped_records = dataset.len() - rows.len();
    let mut warnings = Vec::new();
    if skipped_records > 0 {
        warnings.push(format!(
            "{skipped_records} records lack survival fields or probability"
        ));
    }

    let mut curves = Vec::with_capacity(strata.len());
    for stratum in strata {
        let (times, events): (Vec<f64>, Vec<bool>) = rows
            .iter()
            .filter(|(p, _, _)| stratum.contains(*p))
            .map(|&(_, t, e)| (t, e))
            .unzip();
        if times.is_empty() {
            warnings.push(format!("stratum {:?} is empty; skipped", stratum.label));
            curves.push((stratum.label.clone(), None));
        } else {
            curves.push((stratum.label.clone(), Some(kaplan_meier(&times, &events)?)));
        }
    }
    Ok(StratifiedSurvival {
        curves,
        skipped_records,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCorrelation {
    pub rho: f64,
    /// Interval indices that produced a median.
    pub intervals_used: Vec<usize>,
    /// Evaluated intervals excluded for lacking a computable median.
    pub intervals_excluded: Vec<usize>,
}

/// Rank correlation between per-interval sudo and per-interval median
/// survival time of the wild records. Intervals whose curve never reaches
/// the median are excluded; at least 3 usable intervals are required.
pub fn correlate_sudo_with_survival(
    report: &SudoReport,
    dataset: &Dataset,
) -> Result<SurvivalCorrelation> {
    let scheme = IntervalScheme::from_boundaries(report.boundaries.clone())?;
    let rows = survival_inputs(dataset);

    let mut sudo = Vec::new();
    let mut medians = Vec::new();
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for interval in report.evaluated() {
        let (times, events): (Vec<f64>, Vec<bool>) = rows
            .iter()
            .filter(|(p, _, _)| scheme.locate(*p) == Some(interval.index))
            .map(|&(_, t, e)| (t, e))
            .unzip();
        let median = if times.is_empty() {
            None
        } else {
            kaplan_meier(&times, &events)?.median
        };
        match median {
            Some(m) => {
                sudo.push(interval.detail.as_ref().expect("evaluated").sudo);
                medians.push(m);
                used.push(interval.index);
            }
            None => excluded.push(interval.index),
        }
    }
    if used.len() < 3 {
        return Err(Error::TooFewSurvivalIntervals {
            needed: 3,
            got: used.len(),
        });
    }
    let rho = rank_correlation(&sudo, &medians)?;
    Ok(SurvivalCorrelation {
        rho,
        intervals_used: used,
        intervals_excluded: excluded,
    })
}
