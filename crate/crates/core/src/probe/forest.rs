//! Random forest of Gini-split decision trees. Bootstrap resampling and
//! per-split feature subsampling are driven by per-tree substreams of the
//! probe seed, so training is a pure function of (config, seed, data).

use rand::RngExt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{sample_without_replacement, task_rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubsample {
    /// floor(sqrt(d)) features per split, at least 1.
    Sqrt,
    /// ceil(fraction * d) features per split, clamped to [1, d].
    Fraction(f64),
    /// All features at every split.
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub feature_subsample: FeatureSubsample,
    pub bootstrap: bool,
}

impl Default for RfConfig {
    fn default() -> Self {
        Self {
            n_trees: 50,
            max_depth: 4,
            feature_subsample: FeatureSubsample::Sqrt,
            bootstrap: true,
        }
    }
}

impl RfConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidProbeConfig("n_trees must be >= 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidProbeConfig("max_depth must be >= 1".into()));
        }
        if let FeatureSubsample::Fraction(f) = self.feature_subsample {
            if !(0.0..=1.0).contains(&f) || f == 0.0 {
                return Err(Error::InvalidProbeConfig(
                    "feature_subsample fraction must be in (0, 1]".into(),
                ));
            }
        }
        Ok(())
    }

    fn features_per_split(&self, dim: usize) -> usize {
        match self.feature_subsample {
            FeatureSubsample::Sqrt => ((dim as f64).sqrt().floor() as usize).max(1),
            FeatureSubsample::Fraction(f) => ((f * dim as f64).ceil() as usize).clamp(1, dim),
            FeatureSubsample::All => dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Leaf {
        positive_fraction: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn score(&self, x: &[f64]) -> f64 {
        let mut idx = 0;
        loop {
            match &self.nodes[idx] {
                Node::Leaf { positive_fraction } => return *positive_fraction,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    idx = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<Tree>,
}

fn gini(pos: f64, total: f64) -> f64 {
    if total == 0.0 {
        return 0.0;
    }
    let p = pos / total;
    2.0 * p * (1.0 - p)
}

/// Best (feature, threshold) among the candidates by weighted Gini impurity,
/// with thresholds at midpoints of consecutive sorted unique values.
/// Candidate order is fixed, and only strict improvements replace the
/// incumbent, so the choice is deterministic.
fn best_split(
    features: &[Vec<f64>],
    labels: &[u8],
    indices: &[usize],
    candidates: &[usize],
) -> Option<(usize, f64, f64)> {
    let total = indices.len() as f64;
    let total_pos = indices.iter().filter(|&&i| labels[i] == 1).count() as f64;
    let parent = gini(total_pos, total);
    let mut best: Option<(usize, f64, f64)> = None;

    for &feature in candidates {
        let mut values: Vec<(f64, u8)> = indices
            .iter()
            .map(|&i| (features[i][feature], labels[i]))
            .collect();
        values.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        // Walk thresholds between consecutive distinct values, maintaining
        // left-side counts.
        let mut left_n = 0.0;
        let mut left_pos = 0.0;
        let mut i = 0;
        while i < values.len() {
            let v = values[i].0;
            while i < values.len() && values[i].0 == v {
                left_n += 1.0;
                left_pos += f64::from(values[i].1);
                i += 1;
            }
            if i == values.len() {
                break;
            }
            let threshold = (v + values[i].0) / 2.0;
            let right_n = total - left_n;
            let right_pos = total_pos - left_pos;
            let weighted = (left_n / total) * gini(left_pos, left_n)
                + (right_n / total) * gini(right_pos, right_n);
            let improvement = parent - weighted;
            if improvement > 1e-12 && best.is_none_or(|(_, _, b)| weighted < b) {
                best = Some((feature, threshold, weighted));
            }
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn grow(
    features: &[Vec<f64>],
    labels: &[u8],
    indices: &[usize],
    depth: usize,
    config: &RfConfig,
    dim: usize,
    rng: &mut impl RngExt,
    nodes: &mut Vec<Node>,
) -> usize {
    let pos = indices.iter().filter(|&&i| labels[i] == 1).count();
    let frac = pos as f64 / indices.len() as f64;
    if depth == config.max_depth || pos == 0 || pos == indices.len() {
        nodes.push(Node::Leaf {
            positive_fraction: frac,
        });
        return nodes.len() - 1;
    }

    let k = config.features_per_split(dim);
    let mut candidates = sample_without_replacement(rng, dim, k);
    candidates.sort_unstable();

    match best_split(features, labels, indices, &candidates) {
        None => {
            nodes.push(Node::Leaf {
                positive_fraction: frac,
            });
            nodes.len() - 1
        }
        Some((feature, threshold, _)) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                .iter()
                .partition(|&&i| features[i][feature] <= threshold);
            let slot = nodes.len();
            nodes.push(Node::Leaf {
                positive_fraction: frac,
            }); // placeholder
            let left = grow(
                features,
                labels,
                &left_idx,
                depth + 1,
                config,
                dim,
                rng,
                nodes,
            );
            let right = grow(
                features,
                labels,
                &right_idx,
                depth + 1,
                config,
                dim,
                rng,
                nodes,
            );
            nodes[slot] = Node::Split {
                feature,
                threshold,
                left,
                right,
            };
            slot
        }
    }
}

pub fn train(
    config: &RfConfig,
    seed: u64,
    features: &[Vec<f64>],
    labels: &[u8],
) -> Result<ForestModel> {
    config.validate()?;
    let n = features.len();
    let dim = features[0].len();
    let mut trees = Vec::with_capacity(config.n_trees);
    for t in 0..config.n_trees {
        let mut rng = task_rng(seed, &[0x7265, t as u64]);
        let indices: Vec<usize> = if config.bootstrap {
            (0..n).map(|_| rng.random_range(0..n)).collect()
        } else {
            (0..n).collect()
        };
        let mut nodes = Vec::new();
        grow(
            features, labels, &indices, 0, config, dim, &mut rng, &mut nodes,
        );
        trees.push(Tree { nodes });
    }
    Ok(ForestModel { trees })
}

impl ForestModel {
    /// Mean leaf positive fraction across trees.
    pub fn score(&self, x: &[f64]) -> f64 {
        let sum: f64 = self.trees.iter().map(|t| t.score(x)).sum();
        sum / self.trees.len() as f64
    }
}
