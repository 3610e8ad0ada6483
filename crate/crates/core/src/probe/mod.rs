//! Lightweight binary probe classifiers trained inside the discrepancy
//! engine: a logistic-regression learner and a random-forest learner behind
//! one interface. Probes receive already-standardized features; no scaling
//! happens here.

pub mod forest;
pub mod logistic;

use serde::{Deserialize, Serialize};

pub use forest::{FeatureSubsample, ForestModel, RfConfig};
pub use logistic::{LogisticModel, LrConfig};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeFamily {
    LogisticRegression,
    RandomForest,
}

impl std::str::FromStr for ProbeFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "logistic_regression" | "logistic-regression" => Ok(ProbeFamily::LogisticRegression),
            "random_forest" | "random-forest" => Ok(ProbeFamily::RandomForest),
            other => Err(format!("unknown probe family {other:?}")),
        }
    }
}

/// Probe family, hyperparameters and seed. The seed only matters for the
/// random forest; logistic training is deterministic by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub family: ProbeFamily,
    pub lr: LrConfig,
    pub rf: RfConfig,
    pub seed: u64,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        Self {
            family: ProbeFamily::LogisticRegression,
            lr: LrConfig::default(),
            rf: RfConfig::default(),
            seed: 0,
        }
    }
}

impl ProbeSpec {
    pub fn validate(&self) -> Result<()> {
        self.lr.validate()?;
        self.rf.validate()
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        let mut spec = self.clone();
        spec.seed = seed;
        spec
    }
}

/// An immutable trained probe; `score` maps a feature vector into [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrainedProbe {
    Logistic { model: LogisticModel, dim: usize },
    Forest { model: ForestModel, dim: usize },
}

/// Trains a probe on a binary task. Requires at least one example of each
/// class and a consistent feature dimension.
pub fn train_probe(spec: &ProbeSpec, features: &[Vec<f64>], labels: &[u8]) -> Result<TrainedProbe> {
    spec.validate()?;
    if features.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: features.len(),
            right: labels.len(),
        });
    }
    let dim = features[0].len();
    if let Some(bad) = features.iter().find(|x| x.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    let positives = labels.iter().filter(|&&y| y == 1).count();
    if positives == 0 || positives == labels.len() {
        return Err(Error::SingleClassTrainingSet);
    }

    match spec.family {
        ProbeFamily::LogisticRegression => {
            let model = logistic::train(&spec.lr, features, labels)?;
            Ok(TrainedProbe::Logistic { model, dim })
        }
        ProbeFamily::RandomForest => {
            let model = forest::train(&spec.rf, spec.seed, features, labels)?;
            Ok(TrainedProbe::Forest { model, dim })
        }
    }
}

impl TrainedProbe {
    pub fn dimension(&self) -> usize {
        match self {
            TrainedProbe::Logistic { dim, .. } | TrainedProbe::Forest { dim, .. } => *dim,
        }
    }

    pub fn score(&self, features: &[f64]) -> Result<f64> {
        if features.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: features.len(),
            });
        }
        Ok(match self {
            TrainedProbe::Logistic { model, .. } => model.score(features),
            TrainedProbe::Forest { model, .. } => model.score(features),
        })
    }

    pub fn score_batch(&self, features: &[Vec<f64>]) -> Result<Vec<f64>> {
        features.iter().map(|x| self.score(x)).collect()
    }
}
