//! The pseudo-label discrepancy engine.
//!
//! A run discretizes wild-data probabilities into intervals, samples a fixed
//! number of records from each interval, and for every temporary class
//! assignment trains a probe against ground-truth records of the opposite
//! class, scoring it on the held-out split. The signed gap between the
//! per-pseudo-label mean performances is the interval's discrepancy (sudo):
//! large absolute values mean low class contamination, values below the
//! cutoff flag the interval's predictions as unreliable.
//!
//! The (interval x repeat x arm) grid is embarrassingly parallel. Every task
//! seeds its own random stream from its grid position, so reports are
//! bit-identical for a given master seed no matter how many worker threads
//! run the grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, DatasetRole};
use crate::error::{Error, Result};
use crate::metrics::{self, MetricKind};
use crate::probe::{train_probe, ProbeFamily, ProbeSpec};
use crate::rng::{derive_seed, sample_without_replacement, task_rng};

const TAG_WILD_SAMPLE: u64 = 1;
const TAG_POOL_SAMPLE: u64 = 2;
const TAG_PROBE: u64 = 3;

pub const DEFAULT_MIN_INTERVAL_RECORDS: usize = 10;

/// Ordered, mutually exclusive half-open probability intervals
/// `(b[i], b[i+1]]` covering a sub-range of [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalScheme {
    boundaries: Vec<f64>,
}

impl IntervalScheme {
    pub fn from_boundaries(boundaries: Vec<f64>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::InvalidIntervals);
        }
        let in_range = boundaries
            .iter()
            .all(|b| (0.0..=1.0).contains(b) && b.is_finite());
        let increasing = boundaries.windows(2).all(|w| w[0] < w[1]);
        if !in_range || !increasing {
            return Err(Error::InvalidIntervals);
        }
        Ok(Self { boundaries })
    }

    /// `n` equal-width intervals over `(lo, hi]`.
    pub fn equal_bins(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n == 0 || lo >= hi {
            return Err(Error::InvalidIntervals);
        }
        let boundaries = (0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .collect();
        Self::from_boundaries(boundaries)
    }

    /// Ten equal intervals over (0, 1].
    pub fn deciles() -> Self {
        Self::equal_bins(0.0, 1.0, 10).expect("static bounds")
    }

    pub fn len(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn bounds(&self, index: usize) -> (f64, f64) {
        (self.boundaries[index], self.boundaries[index + 1])
    }

    /// Interval containing `p` under the `(lo, hi]` convention; `None` when
    /// `p` falls outside the covered range (including `p == boundaries[0]`).
    pub fn locate(&self, p: f64) -> Option<usize> {
        if p <= self.boundaries[0] || p > *self.boundaries.last().unwrap() {
            return None;
        }
        let j = self.boundaries.partition_point(|&b| b < p);
        // j >= 1 because p > boundaries[0]; boundary hits resolve downward.
        Some(j - 1)
    }
}

/// Per-interval sample count: fixed, or the minimum evaluable interval
/// occupancy ("auto").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleSize {
    #[default]
    Auto,
    Fixed(usize),
}

impl Serialize for SampleSize {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SampleSize::Auto => serializer.serialize_str("auto"),
            SampleSize::Fixed(m) => serializer.serialize_u64(*m as u64),
        }
    }
}

impl<'de> Deserialize<'de> for SampleSize {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        match &value {
            serde_json::Value::String(s) if s == "auto" => Ok(SampleSize::Auto),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|m| SampleSize::Fixed(m as usize))
                .ok_or_else(|| {
                    serde::de::Error::custom("sample size must be a non-negative integer")
                }),
            _ => Err(serde::de::Error::custom("expected \"auto\" or an integer")),
        }
    }
}

impl std::str::FromStr for SampleSize {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(SampleSize::Auto);
        }
        s.parse::<usize>()
            .map(SampleSize::Fixed)
            .map_err(|_| format!("sample size must be \"auto\" or an integer, got {s:?}"))
    }
}

/// Full configuration of one engine run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SudoRunConfig {
    pub intervals: IntervalScheme,
    pub m: SampleSize,
    pub k: usize,
    pub probe: ProbeSpec,
    pub metric: MetricKind,
    pub master_seed: u64,
    /// Unreliability cutoff: intervals with |sudo| below tau are flagged.
    pub tau: f64,
    /// Intervals with fewer records than max(2, this) are skipped.
    pub min_interval_records: usize,
}

impl Default for SudoRunConfig {
    fn default() -> Self {
        Self {
            intervals: IntervalScheme::deciles(),
            m: SampleSize::Auto,
            k: 5,
            probe: ProbeSpec::default(),
            metric: MetricKind::Auc,
            master_seed: 0,
            tau: 0.05,
            min_interval_records: DEFAULT_MIN_INTERVAL_RECORDS,
        }
    }
}

impl SudoRunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidRunConfig("k must be >= 1".into()));
        }
        if self.tau < 0.0 || !self.tau.is_finite() {
            return Err(Error::InvalidRunConfig("tau must be >= 0".into()));
        }
        if let SampleSize::Fixed(0) = self.m {
            return Err(Error::InvalidRunConfig("m must be >= 1".into()));
        }
        self.probe.validate()
    }

    fn effective_min_records(&self) -> usize {
        self.min_interval_records.max(2)
    }
}

/// Wild record indices per interval plus the count of records whose
/// probability falls outside the covered range.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretized {
    pub members: Vec<Vec<usize>>,
    pub excluded: usize,
}

/// Assigns each wild record to the unique interval with `lo < p <= hi`.
pub fn discretize(wild: &Dataset, intervals: &IntervalScheme) -> Result<Discretized> {
    let p = wild.probabilities()?;
    let mut members = vec![Vec::new(); intervals.len()];
    let mut excluded = 0;
    for (i, &p) in p.iter().enumerate() {
        match intervals.locate(p) {
            Some(idx) => members[idx].push(i),
            None => excluded += 1,
        }
    }
    Ok(Discretized { members, excluded })
}

/// Resolves the per-interval sample count against the evaluated intervals.
/// `Auto` picks the minimum occupancy; a fixed request must not exceed any
/// evaluated interval's occupancy (sampling is without replacement).
pub fn resolve_sample_size(
    intervals: &IntervalScheme,
    members: &[Vec<usize>],
    evaluated: &[usize],
    requested: SampleSize,
) -> Result<usize> {
    if evaluated.is_empty() {
        return Err(Error::NoEvaluableInterval);
    }
    match requested {
        SampleSize::Auto => Ok(evaluated.iter().map(|&i| members[i].len()).min().unwrap()),
        SampleSize::Fixed(m) => {
            for &i in evaluated {
                if members[i].len() < m {
                    let (lo, hi) = intervals.bounds(i);
                    return Err(Error::SampleSizeTooLarge {
                        requested: m,
                        index: i,
                        lo,
                        hi,
                        count: members[i].len(),
                    });
                }
            }
            Ok(m)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalStatus {
    Evaluated,
    SkippedEmpty,
    SkippedLowCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmDetail {
    /// Temporary class assigned to the sampled wild records for this arm.
    pub pseudo_label: usize,
    pub perf: f64,
    pub wild_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatDetail {
    pub repeat: usize,
    pub arms: Vec<ArmDetail>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalDetail {
    pub sampled_m: usize,
    /// Mean held-out performance per pseudo-label, averaged over repeats.
    pub mean_perf: Vec<f64>,
    /// Binary runs: `mean_perf[0] - mean_perf[1]`. Multi-class runs:
    /// max - min over the per-class probes (always >= 0).
    pub sudo: f64,
    pub majority_class: usize,
    pub reliable: bool,
    pub repeats: Vec<RepeatDetail>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalOutcome {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub wild_count: usize,
    pub status: IntervalStatus,
    pub detail: Option<IntervalDetail>,
}

/// Per-interval discrepancies with full per-repeat detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SudoReport {
    pub class_count: usize,
    pub boundaries: Vec<f64>,
    pub m_requested: SampleSize,
    pub m_resolved: usize,
    pub k: usize,
    pub metric: MetricKind,
    pub probe_family: ProbeFamily,
    pub master_seed: u64,
    pub tau: f64,
    pub excluded_records: usize,
    pub warnings: Vec<String>,
    pub intervals: Vec<IntervalOutcome>,
}

impl SudoReport {
    pub fn evaluated(&self) -> impl Iterator<Item = &IntervalOutcome> {
        self.intervals
            .iter()
            .filter(|i| i.status == IntervalStatus::Evaluated)
    }

    /// (interval index, sudo) for every evaluated interval.
    pub fn sudo_values(&self) -> Vec<(usize, f64)> {
        self.evaluated()
            .map(|i| (i.index, i.detail.as_ref().expect("evaluated").sudo))
            .collect()
    }

    /// Interval whose upper edge equals `alpha`, if evaluated.
    pub fn interval_with_upper_edge(&self, alpha: f64) -> Option<&IntervalOutcome> {
        self.evaluated().find(|i| edges_match(i.hi, alpha))
    }

    /// Interval whose lower edge equals `beta`, if evaluated.
    pub fn interval_with_lower_edge(&self, beta: f64) -> Option<&IntervalOutcome> {
        self.evaluated().find(|i| edges_match(i.lo, beta))
    }
}

pub(crate) fn edges_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

fn metric_value(kind: MetricKind, scores: &[f64], labels: &[u8]) -> Result<f64> {
    match kind {
        MetricKind::Auc => metrics::auc(scores, labels),
        other => {
            let t = metrics::threshold_metrics(scores, labels, 0.5);
            let value = match other {
                MetricKind::Accuracy => t.accuracy,
                MetricKind::Precision => t.precision,
                MetricKind::Recall => t.recall,
                MetricKind::Npv => t.npv,
                MetricKind::Auc => unreachable!(),
            };
            value.ok_or_else(|| Error::MetricUndefined {
                metric: other.name().to_string(),
                reason: "empty denominator on the held-out evaluation".into(),
            })
        }
    }
}

enum Mode {
    Binary,
    MultiClass(usize),
}

struct RunContext<'a> {
    wild: &'a Dataset,
    train_features: Vec<Vec<f64>>,
    held_features: Vec<Vec<f64>>,
    /// Per arm: train indices eligible as the ground-truth opposite side.
    arm_pools: Vec<Vec<usize>>,
    /// Per arm: the temporary label assigned to sampled wild records.
    arm_pseudo: Vec<usize>,
    /// Per arm: the label given to ground-truth records in the probe task.
    arm_pool_label: Vec<u8>,
    /// Per arm: wild-side label in the probe task.
    arm_wild_label: Vec<u8>,
    /// Per arm: held-out evaluation labels.
    eval_labels: Vec<Vec<u8>>,
    /// Binary runs keep the discrepancy signed; multi-class runs report the
    /// max-min spread.
    binary: bool,
    config: &'a SudoRunConfig,
    m: usize,
}

#[allow(clippy::needless_range_loop)] // arm indexes several parallel per-arm tables
fn run_one_interval(
    ctx: &RunContext<'_>,
    interval_index: usize,
    members: &[usize],
) -> Result<IntervalDetail> {
    let arms = ctx.arm_pools.len();
    let seed = ctx.config.master_seed;
    let mut repeats = Vec::with_capacity(ctx.config.k);
    let mut perf_sums = vec![0.0; arms];

    for repeat in 0..ctx.config.k {
        let coords = [interval_index as u64, repeat as u64];
        // Both arms receive the identical wild subset for this repeat.
        let mut wild_rng = task_rng(seed, &[TAG_WILD_SAMPLE, coords[0], coords[1]]);
        let wild_sample: Vec<usize> =
            sample_without_replacement(&mut wild_rng, members.len(), ctx.m)
                .into_iter()
                .map(|i| members[i])
                .collect();
        let probe_seed = derive_seed(seed, &[TAG_PROBE, coords[0], coords[1]]);

        let mut arm_details = Vec::with_capacity(arms);
        for arm in 0..arms {
            // The ground-truth side is drawn fresh per repeat from a stream
            // that does not depend on the arm index, which keeps class
            // relabelling an exact mirror of the run.
            let mut pool_rng = task_rng(seed, &[TAG_POOL_SAMPLE, coords[0], coords[1]]);
            let pool = &ctx.arm_pools[arm];
            let pool_sample = sample_without_replacement(&mut pool_rng, pool.len(), ctx.m);

            let mut features = Vec::with_capacity(2 * ctx.m);
            let mut labels = Vec::with_capacity(2 * ctx.m);
            let mut wild_ids = Vec::with_capacity(ctx.m);
            for &w in &wild_sample {
                features.push(ctx.wild.records()[w].features.clone());
                labels.push(ctx.arm_wild_label[arm]);
                wild_ids.push(ctx.wild.records()[w].id.clone());
            }
            for &p in &pool_sample {
                features.push(ctx.train_features[pool[p]].clone());
                labels.push(ctx.arm_pool_label[arm]);
            }

            let spec = ctx.config.probe.with_seed(probe_seed);
            let probe = train_probe(&spec, &features, &labels)?;
            let scores = probe.score_batch(&ctx.held_features)?;
            let perf = metric_value(ctx.config.metric, &scores, &ctx.eval_labels[arm])?;
            perf_sums[arm] += perf;
            arm_details.push(ArmDetail {
                pseudo_label: ctx.arm_pseudo[arm],
                perf,
                wild_ids,
            });
        }
        repeats.push(RepeatDetail {
            repeat,
            arms: arm_details,
        });
    }

    let mean_perf: Vec<f64> = perf_sums.iter().map(|s| s / ctx.config.k as f64).collect();
    let (sudo, majority_class) = if ctx.binary {
        let sudo = mean_perf[0] - mean_perf[1];
        (sudo, if sudo > 0.0 { 0 } else { 1 })
    } else {
        let (mut max_i, mut max_v) = (0usize, f64::NEG_INFINITY);
        let mut min_v = f64::INFINITY;
        for (i, &v) in mean_perf.iter().enumerate() {
            if v > max_v {
                max_v = v;
                max_i = i;
            }
            if v < min_v {
                min_v = v;
            }
        }
        (max_v - min_v, max_i)
    };

    Ok(IntervalDetail {
        sampled_m: ctx.m,
        mean_perf,
        sudo,
        majority_class,
        reliable: sudo.abs() >= ctx.config.tau,
        repeats,
    })
}

fn build_context<'a>(
    wild: &'a Dataset,
    train: &'a Dataset,
    held_out: &'a Dataset,
    config: &'a SudoRunConfig,
    mode: &Mode,
) -> Result<RunContext<'a>> {
    let train_labels = train.labels()?;
    let held_labels = held_out.labels()?;

    let (arm_pools, arm_pseudo, arm_pool_label, arm_wild_label, eval_labels) = match mode {
        Mode::Binary => {
            for &l in train_labels.iter().chain(&held_labels) {
                if l > 1 {
                    return Err(Error::NonBinaryLabels(l));
                }
            }
            for class in 0..2 {
                if !train_labels.contains(&class) {
                    return Err(Error::TrainMissingClass(class));
                }
                if !held_labels.contains(&class) {
                    return Err(Error::HeldOutMissingClass(class));
                }
            }
            // Arm c pseudo-labels wild records as c and draws ground truth
            // from the opposite class.
            let pools: Vec<Vec<usize>> = (0..2)
                .map(|arm| {
                    (0..train_labels.len())
                        .filter(|&i| train_labels[i] == 1 - arm)
                        .collect()
                })
                .collect();
            let eval: Vec<u8> = held_labels.iter().map(|&l| l as u8).collect();
            (
                pools,
                vec![0, 1],
                vec![1u8, 0u8],
                vec![0u8, 1u8],
                vec![eval.clone(), eval],
            )
        }
        Mode::MultiClass(c) => {
            let c = *c;
            if c < 2 {
                return Err(Error::InvalidClassCount(c));
            }
            if let Some(&bad) = train_labels.iter().chain(&held_labels).find(|&&l| l >= c) {
                return Err(Error::InvalidRunConfig(format!(
                    "label {bad} outside the configured {c} classes"
                )));
            }
            for class in 0..c {
                if !train_labels.contains(&class) {
                    return Err(Error::TrainMissingClass(class));
                }
                if !held_labels.contains(&class) {
                    return Err(Error::HeldOutMissingClass(class));
                }
            }
            // Arm i pseudo-labels wild records as class i (positive side of
            // a one-vs-rest probe) against ground truth from every other
            // class pooled.
            let pools: Vec<Vec<usize>> = (0..c)
                .map(|arm| {
                    (0..train_labels.len())
                        .filter(|&i| train_labels[i] != arm)
                        .collect()
                })
                .collect();
            let eval: Vec<Vec<u8>> = (0..c)
                .map(|arm| held_labels.iter().map(|&l| u8::from(l == arm)).collect())
                .collect();
            (pools, (0..c).collect(), vec![0u8; c], vec![1u8; c], eval)
        }
    };

    Ok(RunContext {
        wild,
        train_features: train.records().iter().map(|r| r.features.clone()).collect(),
        held_features: held_out
            .records()
            .iter()
            .map(|r| r.features.clone())
            .collect(),
        arm_pools,
        arm_pseudo,
        arm_pool_label,
        arm_wild_label,
        eval_labels,
        binary: matches!(mode, Mode::Binary),
        config,
        m: 0,
    })
}

fn run_inner(
    wild: &Dataset,
    train: &Dataset,
    held_out: &Dataset,
    config: &SudoRunConfig,
    mode: Mode,
) -> Result<SudoReport> {
    config.validate()?;
    if wild.role() != DatasetRole::Wild {
        return Err(Error::InvalidRunConfig(format!(
            "expected a wild dataset, got role {}",
            wild.role()
        )));
    }

    let discretized = discretize(wild, &config.intervals)?;
    let min_records = config.effective_min_records();
    let mut warnings = Vec::new();

    let mut statuses = Vec::with_capacity(config.intervals.len());
    let mut evaluated = Vec::new();
    for (i, members) in discretized.members.iter().enumerate() {
        let (lo, hi) = config.intervals.bounds(i);
        if members.is_empty() {
            warnings.push(format!("interval {i} ({lo}, {hi}] is empty; skipped"));
            statuses.push(IntervalStatus::SkippedEmpty);
        } else if members.len() < min_records {
            warnings.push(format!(
                "interval {i} ({lo}, {hi}] has {} records, below the minimum {min_records}; skipped",
                members.len()
            ));
            statuses.push(IntervalStatus::SkippedLowCount);
        } else {
            statuses.push(IntervalStatus::Evaluated);
            evaluated.push(i);
        }
    }
    if discretized.excluded > 0 {
        warnings.push(format!(
            "{} records fall outside the configured probability range",
            discretized.excluded
        ));
    }

    let m = resolve_sample_size(
        &config.intervals,
        &discretized.members,
        &evaluated,
        config.m,
    )?;

    // Sampling guideline: flag intervals where m covers less than half of
    // the records.
    let under_sampled: Vec<usize> = evaluated
        .iter()
        .copied()
        .filter(|&i| 2 * m < discretized.members[i].len())
        .collect();
    if !under_sampled.is_empty() {
        warnings.push(format!(
            "m={m} samples less than half of the records in intervals {under_sampled:?}; \
             consider sampling at least 50% of each interval"
        ));
    }

    let mut ctx = build_context(wild, train, held_out, config, &mode)?;
    ctx.m = m;
    for (arm, pool) in ctx.arm_pools.iter().enumerate() {
        if pool.len() < m {
            return Err(Error::InsufficientTrainRecords {
                pseudo_label: ctx.arm_pseudo[arm],
                available: pool.len(),
                needed: m,
            });
        }
    }

    let computed: Vec<(usize, Result<IntervalDetail>)> = evaluated
        .par_iter()
        .map(|&i| (i, run_one_interval(&ctx, i, &discretized.members[i])))
        .collect();
    // Surface errors in interval order so failures are schedule-independent.
    let mut details: Vec<Option<IntervalDetail>> = vec![None; config.intervals.len()];
    for (i, outcome) in computed {
        details[i] = Some(outcome?);
    }

    let intervals = statuses
        .into_iter()
        .enumerate()
        .map(|(i, status)| {
            let (lo, hi) = config.intervals.bounds(i);
            IntervalOutcome {
                index: i,
                lo,
                hi,
                wild_count: discretized.members[i].len(),
                status,
                detail: details[i].take(),
            }
        })
        .collect();

    Ok(SudoReport {
        class_count: match mode {
            Mode::Binary => 2,
            Mode::MultiClass(c) => c,
        },
        boundaries: config.intervals.boundaries().to_vec(),
        m_requested: config.m,
        m_resolved: m,
        k: config.k,
        metric: config.metric,
        probe_family: config.probe.family,
        master_seed: config.master_seed,
        tau: config.tau,
        excluded_records: discretized.excluded,
        warnings,
        intervals,
    })
}

/// Binary pseudo-label discrepancy across all intervals.
pub fn run_sudo(
    wild: &Dataset,
    train: &Dataset,
    held_out: &Dataset,
    config: &SudoRunConfig,
) -> Result<SudoReport> {
    run_inner(wild, train, held_out, config, Mode::Binary)
}

/// Multi-class extension: one probe per class (pseudo-labelled records vs
/// ground truth pooled from the remaining classes); the discrepancy is the
/// spread between the best and worst per-class probe and the majority class
/// is the best probe's class.
pub fn run_sudo_multiclass(
    wild: &Dataset,
    train: &Dataset,
    held_out: &Dataset,
    config: &SudoRunConfig,
    class_count: usize,
) -> Result<SudoReport> {
    run_inner(wild, train, held_out, config, Mode::MultiClass(class_count))
}

/// One row per interval: bounds, occupancy, status, discrepancy summary.
pub fn report_to_csv(report: &SudoReport) -> String {
    let mut out = String::from("index,lo,hi,status,wild_count,m,sudo,majority_class,reliable");
    for c in 0..report.class_count.max(2) {
        out.push_str(&format!(",mean_perf_{c}"));
    }
    out.push('\n');
    for interval in &report.intervals {
        let status = match interval.status {
            IntervalStatus::Evaluated => "evaluated",
            IntervalStatus::SkippedEmpty => "skipped_empty",
            IntervalStatus::SkippedLowCount => "skipped_low_count",
        };
        out.push_str(&format!(
            "{},{},{},{status},{}",
            interval.index, interval.lo, interval.hi, interval.wild_count
        ));
        match &interval.detail {
            Some(d) => {
                out.push_str(&format!(
                    ",{},{},{},{}",
                    d.sampled_m, d.sudo, d.majority_class, d.reliable
                ));
                for perf in &d.mean_perf {
                    out.push_str(&format!(",{perf}"));
                }
            }
            None => {
                // empty m, sudo, majority_class, reliable and per-class columns
                out.push_str(",,,,");
                for _ in 0..report.class_count.max(2) {
                    out.push(',');
                }
            }
        }
        out.push('\n');
    }
    out
}
