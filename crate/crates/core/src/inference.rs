//! Desk-scale inference model: a logistic regression trained on a labelled
//! source split whose scores become the probability column of other
//! datasets. This plays the role of the upstream model under evaluation;
//! the discrepancy engine itself never trains it.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::probe::{train_probe, LrConfig, ProbeFamily, ProbeSpec, TrainedProbe};

/// Trains a binary logistic inference model on a labelled dataset.
pub fn fit_inference_model(train: &Dataset, config: &LrConfig) -> Result<TrainedProbe> {
    let labels = train.labels()?;
    if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
        return Err(Error::NonBinaryLabels(bad));
    }
    let features: Vec<Vec<f64>> = train.records().iter().map(|r| r.features.clone()).collect();
    let y: Vec<u8> = labels.iter().map(|&l| l as u8).collect();
    let spec = ProbeSpec {
        family: ProbeFamily::LogisticRegression,
        lr: config.clone(),
        ..ProbeSpec::default()
    };
    train_probe(&spec, &features, &y)
}

/// Returns a copy of `dataset` with `p` set to the model's score per record.
pub fn apply_inference_model(model: &TrainedProbe, dataset: &Dataset) -> Result<Dataset> {
    let scores: Vec<f64> = dataset
        .records()
        .iter()
        .map(|r| model.score(&r.features))
        .collect::<Result<_>>()?;
    dataset.with_probabilities(&scores)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{generate_source, generate_wild, SimulationConfig};

    #[test]
    fn model_scores_become_probabilities() {
        let config = SimulationConfig::default();
        let (train, _) = generate_source(&config).unwrap();
        let (wild, _) = generate_wild(&config).unwrap();
        let model = fit_inference_model(&train, &LrConfig::default()).unwrap();
        let scored = apply_inference_model(&model, &wild).unwrap();
        let p = scored.probabilities().unwrap();
        assert_eq!(p.len(), wild.len());
        assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn source_model_separates_source_classes() {
        let config = SimulationConfig::default();
        let (train, held_out) = generate_source(&config).unwrap();
        let model = fit_inference_model(&train, &LrConfig::default()).unwrap();
        let scored = apply_inference_model(&model, &held_out).unwrap();
        let scores = scored.probabilities().unwrap();
        let labels: Vec<u8> = held_out
            .labels()
            .unwrap()
            .iter()
            .map(|&l| l as u8)
            .collect();
        let auc = crate::metrics::auc(&scores, &labels).unwrap();
        assert!(auc > 0.85, "source-domain auc {auc}");
    }
}
