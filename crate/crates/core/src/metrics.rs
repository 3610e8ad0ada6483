//! Evaluation metrics: AUC (Mann-Whitney with tie credit), thresholded
//! confusion-matrix metrics, and rank correlation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metric used to score a probe on the held-out set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Auc,
    Accuracy,
    Precision,
    Recall,
    Npv,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Auc => "auc",
            MetricKind::Accuracy => "accuracy",
            MetricKind::Precision => "precision",
            MetricKind::Recall => "recall",
            MetricKind::Npv => "npv",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "auc" => Ok(MetricKind::Auc),
            "accuracy" => Ok(MetricKind::Accuracy),
            "precision" => Ok(MetricKind::Precision),
            "recall" => Ok(MetricKind::Recall),
            "npv" => Ok(MetricKind::Npv),
            other => Err(format!("unknown metric {other:?}")),
        }
    }
}

/// Average ranks (1-based) with ties sharing the mean of their positions.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Positions i..=j (0-based) share rank mean of (i+1)..=(j+1).
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Probability that a random positive outranks a random negative, ties
/// credited one half (the Mann-Whitney statistic).
pub fn auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClassLabels);
    }
    let ranks = average_ranks(scores);
    let rank_sum: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &y)| y == 1)
        .map(|(r, _)| r)
        .sum();
    let n_pos = positives as f64;
    let n_neg = negatives as f64;
    Ok((rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

/// Confusion-matrix metrics at a fixed threshold. Undefined ratios (empty
/// denominators) are reported as absent rather than zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdMetrics {
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub npv: Option<f64>,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

/// Counts predictions of 1 where `score >= threshold` against binary labels.
pub fn threshold_metrics(scores: &[f64], labels: &[u8], threshold: f64) -> ThresholdMetrics {
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&s, &y) in scores.iter().zip(labels) {
        match (s >= threshold, y == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    ThresholdMetrics {
        accuracy: ratio(tp + tn, tp + fp + tn + fn_),
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fn_),
        npv: ratio(tn, tn + fn_),
        tp,
        fp,
        tn,
        fn_,
    }
}

/// Correlation family. Spearman is the default throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationKind {
    Spearman,
    Pearson,
}

impl std::str::FromStr for CorrelationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "spearman" => Ok(CorrelationKind::Spearman),
            "pearson" => Ok(CorrelationKind::Pearson),
            other => Err(format!("unknown correlation {other:?}")),
        }
    }
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mean_x) * (b - mean_y);
        var_x += (a - mean_x) * (a - mean_x);
        var_y += (b - mean_y) * (b - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::ZeroRankVariance);
    }
    Ok(cov / (var_x * var_y).sqrt())
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn rank_correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    correlation(x, y, CorrelationKind::Spearman)
}

pub fn correlation(x: &[f64], y: &[f64], kind: CorrelationKind) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: x.len(),
        });
    }
    match kind {
        CorrelationKind::Spearman => pearson(&average_ranks(x), &average_ranks(y)),
        CorrelationKind::Pearson => pearson(x, y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngExt;

    /// Exhaustive pairwise AUC used as an independent oracle.
    pub fn auc_pairwise(scores: &[f64], labels: &[u8]) -> f64 {
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for (i, &yi) in labels.iter().enumerate() {
            if yi != 1 {
                continue;
            }
            for (j, &yj) in labels.iter().enumerate() {
                if yj != 0 {
                    continue;
                }
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn perfect_ranking_is_one() {
        assert_eq!(auc(&[0.1, 0.9], &[0, 1]).unwrap(), 1.0);
    }

    #[test]
    fn full_tie_is_half() {
        assert_eq!(auc(&[0.5, 0.5], &[0, 1]).unwrap(), 0.5);
    }

    #[test]
    fn matches_pairwise_oracle_on_random_instances() {
        let mut rng = crate::rng::task_rng(42, &[]);
        for _ in 0..20 {
            let n = 30;
            let scores: Vec<f64> = (0..n)
                .map(|_| (rng.random::<f64>() * 8.0).round() / 8.0)
                .collect();
            let mut labels: Vec<u8> = (0..n)
                .map(|_| u8::from(rng.random::<f64>() > 0.5))
                .collect();
            labels[0] = 0;
            labels[1] = 1;
            let fast = auc(&scores, &labels).unwrap();
            let slow = auc_pairwise(&scores, &labels);
            assert!((fast - slow).abs() < 1e-12, "{fast} vs {slow}");
        }
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(
            auc(&[0.1, 0.9], &[1, 1]),
            Err(Error::SingleClassLabels)
        ));
    }

    #[test]
    fn auc_complements_under_label_flip() {
        let scores = [0.1, 0.4, 0.4, 0.8, 0.2, 0.9];
        let labels = [0u8, 1, 0, 1, 1, 0];
        let flipped: Vec<u8> = labels.iter().map(|&y| 1 - y).collect();
        let total = auc(&scores, &labels).unwrap() + auc(&scores, &flipped).unwrap();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn auc_invariant_under_monotone_transform() {
        let scores = [0.1, 0.4, 0.35, 0.8, 0.2];
        let labels = [0u8, 1, 0, 1, 1];
        let transformed: Vec<f64> = scores.iter().map(|s| (s * 3.0f64).exp()).collect();
        let a = auc(&scores, &labels).unwrap();
        let b = auc(&transformed, &labels).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn npv_from_definition() {
        // 3 true negatives, 1 false negative.
        let scores = [0.1, 0.2, 0.3, 0.4];
        let labels = [0u8, 0, 0, 1];
        let m = threshold_metrics(&scores, &labels, 0.5);
        assert_eq!(m.npv, Some(0.75));
        assert_eq!(m.tn, 3);
        assert_eq!(m.fn_, 1);
    }

    #[test]
    fn empty_positive_set_leaves_precision_absent() {
        let scores = [0.1, 0.2];
        let labels = [0u8, 0];
        let m = threshold_metrics(&scores, &labels, 0.5);
        assert_eq!(m.npv, Some(1.0));
        assert_eq!(m.precision, None);
        assert_eq!(m.recall, None);
        assert_eq!(m.accuracy, Some(1.0));
    }

    #[test]
    fn confusion_counts_match_direct_enumeration() {
        let mut rng = crate::rng::task_rng(7, &[1]);
        let scores: Vec<f64> = (0..20).map(|_| rng.random::<f64>()).collect();
        let labels: Vec<u8> = (0..20)
            .map(|_| u8::from(rng.random::<f64>() > 0.4))
            .collect();
        let m = threshold_metrics(&scores, &labels, 0.5);
        let tp = scores
            .iter()
            .zip(&labels)
            .filter(|(&s, &y)| s >= 0.5 && y == 1)
            .count();
        let tn = scores
            .iter()
            .zip(&labels)
            .filter(|(&s, &y)| s < 0.5 && y == 0)
            .count();
        assert_eq!(m.tp, tp);
        assert_eq!(m.tn, tn);
        assert_eq!(m.accuracy, Some((tp + tn) as f64 / 20.0));
    }

    #[test]
    fn monotone_sequences_correlate_at_extremes() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let up = [10.0, 20.0, 40.0, 80.0];
        let down = [8.0, 6.0, 4.0, 2.0];
        assert!((rank_correlation(&x, &up).unwrap() - 1.0).abs() < 1e-12);
        assert!((rank_correlation(&x, &down).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_with_ties_matches_rank_then_pearson() {
        let x = [1.0, 2.0, 2.0, 3.0, 4.0, 4.0, 4.0, 5.0, 6.0, 7.0];
        let y = [2.0, 1.0, 3.0, 3.0, 5.0, 4.0, 6.0, 6.0, 8.0, 7.0];
        // Hand-computed average ranks.
        let rx = [1.0, 2.5, 2.5, 4.0, 6.0, 6.0, 6.0, 8.0, 9.0, 10.0];
        let ry = [2.0, 1.0, 3.5, 3.5, 6.0, 5.0, 7.5, 7.5, 10.0, 9.0];
        let expected = pearson(&rx, &ry).unwrap();
        let got = rank_correlation(&x, &y).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(
            rank_correlation(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            rank_correlation(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::ZeroRankVariance)
        ));
        assert!(matches!(
            rank_correlation(&[1.0, 2.0, 3.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn spearman_invariant_under_monotone_transforms() {
        let x = [0.3, 1.2, 0.9, 2.5, 1.7, 0.1];
        let y = [4.0, 2.0, 5.0, 1.0, 3.0, 6.0];
        let base = rank_correlation(&x, &y).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let ty: Vec<f64> = y.iter().map(|v| v * 10.0 + 3.0).collect();
        assert!((rank_correlation(&tx, &ty).unwrap() - base).abs() < 1e-12);
    }
}
