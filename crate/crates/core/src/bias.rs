//! Group-stratified discrepancy runs for algorithmic-bias assessment.
//!
//! Wild records are partitioned by their group tag and the engine runs once
//! per group under one shared configuration and master seed, so per-group
//! differences reflect the data, not the protocol. A gap in per-group sudo
//! indicates more class contamination (poorer performance) for one group.
//! When hidden labels are available, per-group negative predictive value
//! validates the ordering.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, SidecarLabels};
use crate::engine::{
    discretize, resolve_sample_size, run_sudo, IntervalStatus, SampleSize, SudoReport,
    SudoRunConfig,
};
use crate::error::{Error, Result};
use crate::metrics::threshold_metrics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GroupOutcome {
    Evaluated(SudoReport),
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResult {
    pub group: String,
    pub outcome: GroupOutcome,
}

/// Signed difference of per-interval sudo between two groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDelta {
    pub interval_index: usize,
    pub group_a: String,
    pub group_b: String,
    /// sudo(group_a) - sudo(group_b)
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    pub groups: Vec<GroupResult>,
    pub deltas: Vec<GroupDelta>,
    /// Records with no group tag, left out of the audit.
    pub ungrouped_records: usize,
    pub warnings: Vec<String>,
}

impl BiasReport {
    pub fn evaluated_groups(&self) -> impl Iterator<Item = (&str, &SudoReport)> {
        self.groups.iter().filter_map(|g| match &g.outcome {
            GroupOutcome::Evaluated(report) => Some((g.group.as_str(), report)),
            GroupOutcome::Skipped { .. } => None,
        })
    }
}

fn partition_by_group(wild: &Dataset) -> (BTreeMap<String, Vec<usize>>, usize) {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut ungrouped = 0;
    for (i, record) in wild.records().iter().enumerate() {
        match &record.group {
            Some(group) => groups.entry(group.clone()).or_default().push(i),
            None => ungrouped += 1,
        }
    }
    (groups, ungrouped)
}

/// Runs the engine once per group with identical intervals, sample size,
/// repeat count, probe, metric and master seed. An `Auto` sample size is
/// resolved globally (the minimum evaluable occupancy across groups) so
/// every group samples the same m. Groups that cannot satisfy the protocol
/// are skipped and reported.
pub fn run_bias_audit(
    wild: &Dataset,
    train: &Dataset,
    held_out: &Dataset,
    config: &SudoRunConfig,
) -> Result<BiasReport> {
    config.validate()?;
    let (groups, ungrouped_records) = partition_by_group(wild);
    let mut warnings = Vec::new();
    if ungrouped_records > 0 {
        warnings.push(format!(
            "{ungrouped_records} records have no group tag and were ignored"
        ));
    }
    if groups.len() < 2 {
        return Err(Error::TooFewGroups(groups.len()));
    }

    let min_records = config.min_interval_records.max(2);
    let group_datasets: BTreeMap<String, Dataset> = groups
        .iter()
        .map(|(name, indices)| {
            let records = indices.iter().map(|&i| wild.records()[i].clone()).collect();
            Ok((name.clone(), Dataset::new(records, wild.role())?))
        })
        .collect::<Result<_>>()?;

    // Resolve one shared m across groups.
    let m = match config.m {
        SampleSize::Fixed(m) => m,
        SampleSize::Auto => {
            let mut minimum: Option<usize> = None;
            for dataset in group_datasets.values() {
                let d = discretize(dataset, &config.intervals)?;
                let evaluated: Vec<usize> = (0..d.members.len())
                    .filter(|&i| d.members[i].len() >= min_records)
                    .collect();
                if let Ok(m) =
                    resolve_sample_size(&config.intervals, &d.members, &evaluated, SampleSize::Auto)
                {
                    minimum = Some(minimum.map_or(m, |cur| cur.min(m)));
                }
            }
            minimum.ok_or(Error::NoEvaluableInterval)?
        }
    };
    let shared_config = SudoRunConfig {
        m: SampleSize::Fixed(m),
        ..config.clone()
    };

    let mut results = Vec::new();
    for (name, dataset) in &group_datasets {
        // Groups below twice the sample size cannot produce a stable
        // estimate; skip them rather than failing the audit.
        if dataset.len() < 2 * m {
            warnings.push(format!(
                "group {name:?} has {} records, below 2m = {}",
                dataset.len(),
                2 * m
            ));
            results.push(GroupResult {
                group: name.clone(),
                outcome: GroupOutcome::Skipped {
                    reason: format!("{} records, need at least {}", dataset.len(), 2 * m),
                },
            });
            continue;
        }
        match run_sudo(dataset, train, held_out, &shared_config) {
            Ok(report) => results.push(GroupResult {
                group: name.clone(),
                outcome: GroupOutcome::Evaluated(report),
            }),
            Err(
                err @ (Error::NoEvaluableInterval
                | Error::SampleSizeTooLarge { .. }
                | Error::InsufficientTrainRecords { .. }),
            ) => {
                warnings.push(format!("group {name:?} skipped: {err}"));
                results.push(GroupResult {
                    group: name.clone(),
                    outcome: GroupOutcome::Skipped {
                        reason: err.to_string(),
                    },
                });
            }
            Err(err) => return Err(err),
        }
    }

    let evaluated: Vec<(&str, &SudoReport)> = results
        .iter()
        .filter_map(|g| match &g.outcome {
            GroupOutcome::Evaluated(report) => Some((g.group.as_str(), report)),
            GroupOutcome::Skipped { .. } => None,
        })
        .collect();
    if evaluated.len() < 2 {
        return Err(Error::TooFewGroups(evaluated.len()));
    }

    let mut deltas = Vec::new();
    for (i, (name_a, report_a)) in evaluated.iter().enumerate() {
        for (name_b, report_b) in evaluated.iter().skip(i + 1) {
            for (ia, ib) in report_a.intervals.iter().zip(&report_b.intervals) {
                if ia.status == IntervalStatus::Evaluated && ib.status == IntervalStatus::Evaluated
                {
                    deltas.push(GroupDelta {
                        interval_index: ia.index,
                        group_a: name_a.to_string(),
                        group_b: name_b.to_string(),
                        delta: ia.detail.as_ref().unwrap().sudo - ib.detail.as_ref().unwrap().sudo,
                    });
                }
            }
        }
    }

    Ok(BiasReport {
        groups: results,
        deltas,
        ungrouped_records,
        warnings,
    })
}

/// Per-group negative predictive value at a decision threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupNpv {
    pub group: String,
    /// Absent when the group has no predicted negatives.
    pub npv: Option<f64>,
    pub predicted_negatives: usize,
    pub true_negatives: usize,
}

/// Validates a bias finding with hidden labels: NPV of the thresholded
/// predictions per group, comparable to the per-group sudo ordering.
pub fn validate_bias_with_labels(
    wild: &Dataset,
    hidden: &SidecarLabels,
    threshold: f64,
) -> Result<Vec<GroupNpv>> {
    let (groups, _) = partition_by_group(wild);
    if groups.len() < 2 {
        return Err(Error::TooFewGroups(groups.len()));
    }
    let mut out = Vec::new();
    for (name, indices) in groups {
        let mut scores = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in &indices {
            let record = &wild.records()[i];
            let p = record.p.ok_or_else(|| Error::MissingProbability {
                id: record.id.clone(),
                role: "wild".into(),
            })?;
            let label = hidden
                .get(&record.id)
                .ok_or_else(|| Error::MissingHiddenLabel {
                    id: record.id.clone(),
                })?;
            scores.push(p);
            labels.push(u8::from(label >= 1));
        }
        let m = threshold_metrics(&scores, &labels, threshold);
        out.push(GroupNpv {
            group: name,
            npv: m.npv,
            predicted_negatives: m.tn + m.fn_,
            true_negatives: m.tn,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{split_hidden_labels, DatasetRole, PredictionRecord};
    use crate::engine::IntervalScheme;
    use crate::rng::task_rng;
    use crate::sim::{generate_source, sample_gaussian_records, GaussianSpec, SimulationConfig};

    /// Two groups whose class mixtures inside (0, 0.2] are engineered.
    fn grouped_wild(counts: &[(&str, usize, usize)], seed: u64) -> (Dataset, SidecarLabels) {
        let negative = GaussianSpec::new([2.0, -1.0], [1.0, 1.0]);
        let positive = GaussianSpec::new([3.0, 0.0], [1.0, 1.0]);
        let mut rng = task_rng(seed, &[0xB1]);
        let mut records = Vec::new();
        for (group, negatives, positives) in counts {
            let offset = records.len();
            let mut batch =
                sample_gaussian_records(&negative, *negatives, 0, "g", offset, &mut rng);
            batch.extend(sample_gaussian_records(
                &positive,
                *positives,
                1,
                "g",
                offset + negatives,
                &mut rng,
            ));
            for (i, r) in batch.iter_mut().enumerate() {
                r.group = Some((*group).to_string());
                r.p = Some(0.001 + 0.198 * ((i % 97) as f64 / 96.0));
            }
            records.extend(batch);
        }
        let (stripped, sidecar) = split_hidden_labels(records);
        (Dataset::new(stripped, DatasetRole::Wild).unwrap(), sidecar)
    }

    fn config_single_interval(m: usize) -> SudoRunConfig {
        SudoRunConfig {
            intervals: IntervalScheme::from_boundaries(vec![0.0, 0.2]).unwrap(),
            m: SampleSize::Fixed(m),
            ..SudoRunConfig::default()
        }
    }

    #[test]
    fn cloned_groups_get_identical_sudo() {
        let (train, held_out) = generate_source(&SimulationConfig::default()).unwrap();
        let (half, _) = grouped_wild(&[("a", 160, 40)], 2);
        // Group b carries byte-identical content under fresh ids.
        let mut records = half.records().to_vec();
        records.extend(half.records().iter().enumerate().map(|(i, r)| {
            let mut r = r.clone();
            r.id = format!("clone{i}");
            r.group = Some("b".into());
            r
        }));
        let wild = Dataset::new(records, DatasetRole::Wild).unwrap();
        let report = run_bias_audit(&wild, &train, &held_out, &config_single_interval(80)).unwrap();
        let sudo: Vec<f64> = report
            .evaluated_groups()
            .map(|(_, r)| r.intervals[0].detail.as_ref().unwrap().sudo)
            .collect();
        assert_eq!(sudo.len(), 2);
        assert_eq!(sudo[0], sudo[1]);
    }

    #[test]
    fn statistically_identical_groups_have_small_delta() {
        let (train, held_out) = generate_source(&SimulationConfig::default()).unwrap();
        // Independent draws from one mixture, split across two groups.
        let (wild, _) = grouped_wild(&[("a", 160, 40), ("b", 160, 40)], 2);
        let report = run_bias_audit(&wild, &train, &held_out, &config_single_interval(80)).unwrap();
        let sudo: Vec<f64> = report
            .evaluated_groups()
            .map(|(_, r)| r.intervals[0].detail.as_ref().unwrap().sudo)
            .collect();
        assert_eq!(sudo.len(), 2);
        assert!((sudo[0] - sudo[1]).abs() <= 0.05, "{sudo:?}");
    }

    #[test]
    fn contaminated_group_scores_lower() {
        let (train, held_out) = generate_source(&SimulationConfig::default()).unwrap();
        let (wild, _) = grouped_wild(&[("clean", 180, 20), ("mixed", 120, 80)], 3);
        let report =
            run_bias_audit(&wild, &train, &held_out, &config_single_interval(100)).unwrap();
        let by_group: BTreeMap<&str, f64> = report
            .evaluated_groups()
            .map(|(g, r)| (g, r.intervals[0].detail.as_ref().unwrap().sudo))
            .collect();
        assert!(by_group["clean"] > by_group["mixed"], "{by_group:?}");
        assert_eq!(report.deltas.len(), 1);
        assert!(report.deltas[0].delta > 0.0);
    }

    #[test]
    fn permuting_one_group_leaves_others_unchanged() {
        let (train, held_out) = generate_source(&SimulationConfig::default()).unwrap();
        let (wild, _) = grouped_wild(&[("a", 150, 50), ("b", 100, 100)], 4);
        let base = run_bias_audit(&wild, &train, &held_out, &config_single_interval(80)).unwrap();

        // Reverse group b's records in place.
        let mut records = wild.records().to_vec();
        let b_indices: Vec<usize> = records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.group.as_deref() == Some("b"))
            .map(|(i, _)| i)
            .collect();
        let reversed: Vec<PredictionRecord> = b_indices
            .iter()
            .rev()
            .map(|&i| records[i].clone())
            .collect();
        for (&slot, record) in b_indices.iter().zip(reversed) {
            records[slot] = record;
        }
        let permuted = Dataset::new(records, DatasetRole::Wild).unwrap();
        let after =
            run_bias_audit(&permuted, &train, &held_out, &config_single_interval(80)).unwrap();

        let sudo_a = |r: &BiasReport| {
            r.evaluated_groups()
                .find(|(g, _)| *g == "a")
                .map(|(_, rep)| rep.intervals[0].detail.as_ref().unwrap().sudo)
                .unwrap()
        };
        assert_eq!(sudo_a(&base), sudo_a(&after));
    }

    #[test]
    fn undersized_groups_are_skipped() {
        let (train, held_out) = generate_source(&SimulationConfig::default()).unwrap();
        let (wild, _) = grouped_wild(&[("big", 160, 40), ("mid", 120, 40), ("tiny", 20, 5)], 5);
        let report = run_bias_audit(&wild, &train, &held_out, &config_single_interval(80)).unwrap();
        let skipped: Vec<&str> = report
            .groups
            .iter()
            .filter(|g| matches!(g.outcome, GroupOutcome::Skipped { .. }))
            .map(|g| g.group.as_str())
            .collect();
        assert_eq!(skipped, vec!["tiny"]);
        assert_eq!(report.evaluated_groups().count(), 2);
    }

    #[test]
    fn single_group_is_an_error() {
        let (train, held_out) = generate_source(&SimulationConfig::default()).unwrap();
        let (wild, _) = grouped_wild(&[("only", 100, 20)], 6);
        assert!(matches!(
            run_bias_audit(&wild, &train, &held_out, &config_single_interval(50)),
            Err(Error::TooFewGroups(1))
        ));
    }

    #[test]
    fn npv_validation_orders_engineered_groups() {
        let (wild, sidecar) = grouped_wild(&[("clean", 180, 20), ("mixed", 120, 80)], 7);
        let npv = validate_bias_with_labels(&wild, &sidecar, 0.5).unwrap();
        let by_group: BTreeMap<&str, f64> = npv
            .iter()
            .map(|g| (g.group.as_str(), g.npv.unwrap()))
            .collect();
        // Every p sits below 0.5, so NPV equals one minus contamination.
        assert!((by_group["clean"] - 0.9).abs() < 1e-12);
        assert!((by_group["mixed"] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn all_correct_negatives_give_unit_npv() {
        let (wild, sidecar) = grouped_wild(&[("a", 100, 0), ("b", 80, 0)], 8);
        let npv = validate_bias_with_labels(&wild, &sidecar, 0.5).unwrap();
        assert!(npv.iter().all(|g| g.npv == Some(1.0)));
        let delta = npv[0].npv.unwrap() - npv[1].npv.unwrap();
        assert_eq!(delta, 0.0);
    }
}
