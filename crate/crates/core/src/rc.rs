//! Reliability-completeness curves for label-free model comparison.
//!
//! A threshold pair accepts predictions with `p <= max(A)` as class 0 and
//! `p >= min(B)` as class 1, abstaining in between. Reliability averages the
//! absolute discrepancy of the intervals adjacent to the thresholds;
//! completeness is the accepted fraction of the wild data. Sweeping pairs
//! from strictest to loosest traces a curve whose normalized trapezoidal
//! area (AURCC) ranks models: a flat curve at height r integrates to r.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::engine::{edges_match, SudoReport};
use crate::error::{Error, Result};

/// Sets of low (A) and high (B) acceptance thresholds with max(A) < min(B).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl ThresholdPair {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        if low.is_empty() || high.is_empty() {
            return Err(Error::InvalidThresholdPair(
                "both threshold sets must be non-empty".into(),
            ));
        }
        let valid = |v: &f64| (0.0..=1.0).contains(v) && v.is_finite();
        if !(low.iter().all(valid) && high.iter().all(valid)) {
            return Err(Error::InvalidThresholdPair(
                "thresholds must lie in [0, 1]".into(),
            ));
        }
        let pair = Self { low, high };
        if pair.alpha_star() >= pair.beta_star() {
            return Err(Error::InvalidThresholdPair(format!(
                "max(A)={} must be below min(B)={}",
                pair.alpha_star(),
                pair.beta_star()
            )));
        }
        Ok(pair)
    }

    /// Effective low cutoff, max(A).
    pub fn alpha_star(&self) -> f64 {
        self.low.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Effective high cutoff, min(B).
    pub fn beta_star(&self) -> f64 {
        self.high.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Class 0 below the low cutoff, class 1 at or above the high cutoff,
/// abstention in the gap. Both boundaries are accepting.
pub fn selective_predict(p: f64, pair: &ThresholdPair) -> Option<u8> {
    if p <= pair.alpha_star() {
        Some(0)
    } else if p >= pair.beta_star() {
        Some(1)
    } else {
        None
    }
}

/// Mean absolute discrepancy over the threshold grid:
/// `(1 / (2|A||B|)) * sum over (alpha, beta) of |sudo(alpha)| + |sudo(beta)|`,
/// where `sudo(alpha)` belongs to the evaluated interval whose upper edge is
/// `alpha` and `sudo(beta)` to the one whose lower edge is `beta`.
pub fn reliability(report: &SudoReport, pair: &ThresholdPair) -> Result<f64> {
    let sudo_at_upper = |alpha: f64| -> Result<f64> {
        report
            .interval_with_upper_edge(alpha)
            .and_then(|i| i.detail.as_ref())
            .map(|d| d.sudo)
            .ok_or(Error::UnalignedThreshold(alpha))
    };
    let sudo_at_lower = |beta: f64| -> Result<f64> {
        report
            .interval_with_lower_edge(beta)
            .and_then(|i| i.detail.as_ref())
            .map(|d| d.sudo)
            .ok_or(Error::UnalignedThreshold(beta))
    };

    let mut total = 0.0;
    for &alpha in &pair.low {
        for &beta in &pair.high {
            total += sudo_at_upper(alpha)?.abs() + sudo_at_lower(beta)?.abs();
        }
    }
    Ok(total / (2.0 * pair.low.len() as f64 * pair.high.len() as f64))
}

/// Fraction of wild records accepted by the pair.
pub fn completeness(wild: &Dataset, pair: &ThresholdPair) -> Result<f64> {
    let p = wild.probabilities()?;
    let accepted = p
        .iter()
        .filter(|&&p| selective_predict(p, pair).is_some())
        .count();
    Ok(accepted as f64 / p.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RcPoint {
    pub completeness: f64,
    pub reliability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RcCurve {
    /// Points ordered by completeness (duplicate completeness averaged).
    pub points: Vec<RcPoint>,
    /// Trapezoidal area over the completeness span, normalized by the span.
    pub aurcc: f64,
    /// Number of threshold pairs evaluated.
    pub pair_count: usize,
}

/// Evaluates every pair and integrates reliability over completeness.
pub fn build_rc_curve(
    report: &SudoReport,
    wild: &Dataset,
    pairs: &[ThresholdPair],
) -> Result<RcCurve> {
    if pairs.len() < 2 {
        return Err(Error::TooFewPairs(pairs.len()));
    }
    let mut points: Vec<RcPoint> = pairs
        .iter()
        .map(|pair| {
            Ok(RcPoint {
                completeness: completeness(wild, pair)?,
                reliability: reliability(report, pair)?,
            })
        })
        .collect::<Result<_>>()?;
    points.sort_by(|a, b| a.completeness.partial_cmp(&b.completeness).unwrap());

    // Average reliabilities sharing one completeness value.
    let mut merged: Vec<RcPoint> = Vec::with_capacity(points.len());
    let mut i = 0;
    while i < points.len() {
        let mut j = i;
        let mut sum = 0.0;
        while j < points.len() && points[j].completeness == points[i].completeness {
            sum += points[j].reliability;
            j += 1;
        }
        merged.push(RcPoint {
            completeness: points[i].completeness,
            reliability: sum / (j - i) as f64,
        });
        i = j;
    }

    if merged.len() < 2 {
        return Err(Error::DegenerateCurve);
    }
    let span = merged.last().unwrap().completeness - merged[0].completeness;
    if span <= 0.0 {
        return Err(Error::DegenerateCurve);
    }
    let mut area = 0.0;
    for w in merged.windows(2) {
        area +=
            (w[1].completeness - w[0].completeness) * (w[0].reliability + w[1].reliability) / 2.0;
    }

    Ok(RcCurve {
        points: merged,
        aurcc: area / span,
        pair_count: pairs.len(),
    })
}

/// Default pair sweep for a report: nested pairs pairing the j smallest
/// upper edges below the covered range's midpoint with the j largest lower
/// edges above it, from strictest (one edge each side) to loosest.
pub fn default_pairs(report: &SudoReport) -> Result<Vec<ThresholdPair>> {
    let evaluated: Vec<_> = report.evaluated().collect();
    if evaluated.is_empty() {
        return Err(Error::NoEvaluableInterval);
    }
    let lo = evaluated.iter().map(|i| i.lo).fold(f64::INFINITY, f64::min);
    let hi = evaluated
        .iter()
        .map(|i| i.hi)
        .fold(f64::NEG_INFINITY, f64::max);
    let mid = (lo + hi) / 2.0;

    let mut alphas: Vec<f64> = evaluated
        .iter()
        .map(|i| i.hi)
        .filter(|&e| e < mid && !edges_match(e, mid))
        .collect();
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut betas: Vec<f64> = evaluated
        .iter()
        .map(|i| i.lo)
        .filter(|&e| e > mid && !edges_match(e, mid))
        .collect();
    betas.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let k = alphas.len().min(betas.len());
    if k < 2 {
        return Err(Error::TooFewPairs(k));
    }
    (1..=k)
        .map(|j| ThresholdPair::new(alphas[..j].to_vec(), betas[..j].to_vec()))
        .collect()
}
