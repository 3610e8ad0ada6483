//! Run-configuration handling: a `key = value` file (# comments allowed)
//! merged with command-line overrides into a [`SudoRunConfig`].
//!
//! Recognized keys:
//!   intervals = 0,0.1,...,1.0      explicit boundaries, or
//!   range = 0,1  /  bins = 10      equal-width bins over (lo, hi]
//!   m = auto | `<count>`
//!   k = 5
//!   probe = logistic_regression | random_forest
//!   lr.learning_rate / lr.epochs / lr.l2
//!   rf.n_trees / rf.max_depth / rf.feature_subsample (sqrt | all | `<frac>`)
//!   rf.bootstrap = true | false
//!   metric = auc | accuracy | precision | recall | npv
//!   master_seed = 0
//!   tau = 0.05
//!   min_interval_records = 10

use std::collections::BTreeMap;
use std::path::Path;

use sudo_eval::engine::{IntervalScheme, SampleSize, SudoRunConfig};
use sudo_eval::metrics::MetricKind;
use sudo_eval::probe::FeatureSubsample;

use crate::cli_error::{CliError, CliResult};

#[derive(Debug, Default, Clone)]
pub struct RunOverrides {
    pub intervals: Option<String>,
    pub range: Option<String>,
    pub bins: Option<usize>,
    pub m: Option<String>,
    pub k: Option<usize>,
    pub probe: Option<String>,
    pub metric: Option<String>,
    pub seed: Option<u64>,
    pub tau: Option<f64>,
    pub min_interval_records: Option<usize>,
}

fn parse_kv(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::config(format!(
                "{}:{}: expected `key = value`, got {raw:?}",
                path.display(),
                i + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> CliResult<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| CliError::config(format!("{key} = {value:?}: {e}")))
}

fn parse_float_list(key: &str, value: &str) -> CliResult<Vec<f64>> {
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::config(format!("{key} = {value:?}: {v:?} is not a number")))
        })
        .collect()
}

/// Loads the optional config file, applies overrides, returns the run config.
pub fn resolve_run_config(
    path: Option<&Path>,
    overrides: &RunOverrides,
) -> CliResult<SudoRunConfig> {
    let file = match path {
        Some(p) => parse_kv(p)?,
        None => BTreeMap::new(),
    };
    let pick = |key: &str, over: &Option<String>| -> Option<String> {
        over.clone().or_else(|| file.get(key).cloned())
    };

    let mut config = SudoRunConfig::default();

    // Intervals: explicit boundaries win over range/bins.
    let intervals = pick("intervals", &overrides.intervals);
    let range = pick("range", &overrides.range);
    let bins = match overrides.bins {
        Some(b) => Some(b),
        None => file
            .get("bins")
            .map(|v| parse::<usize>("bins", v))
            .transpose()?,
    };
    config.intervals = match (intervals, range, bins) {
        (Some(bounds), _, _) => {
            IntervalScheme::from_boundaries(parse_float_list("intervals", &bounds)?)
                .map_err(|e| CliError::config(e.to_string()))?
        }
        (None, Some(range), bins) => {
            let ends = parse_float_list("range", &range)?;
            if ends.len() != 2 {
                return Err(CliError::config(format!(
                    "range must be `lo,hi`, got {range:?}"
                )));
            }
            IntervalScheme::equal_bins(ends[0], ends[1], bins.unwrap_or(10))
                .map_err(|e| CliError::config(e.to_string()))?
        }
        (None, None, Some(bins)) => IntervalScheme::equal_bins(0.0, 1.0, bins)
            .map_err(|e| CliError::config(e.to_string()))?,
        (None, None, None) => IntervalScheme::deciles(),
    };

    if let Some(m) = pick("m", &overrides.m) {
        config.m = parse::<SampleSize>("m", &m)?;
    }
    if let Some(k) = overrides
        .k
        .map(Ok)
        .or_else(|| file.get("k").map(|v| parse::<usize>("k", v)))
    {
        config.k = k?;
    }
    if let Some(probe) = pick("probe", &overrides.probe) {
        config.probe.family = parse("probe", &probe)?;
    }
    if let Some(v) = file.get("lr.learning_rate") {
        config.probe.lr.learning_rate = parse("lr.learning_rate", v)?;
    }
    if let Some(v) = file.get("lr.epochs") {
        config.probe.lr.epochs = parse("lr.epochs", v)?;
    }
    if let Some(v) = file.get("lr.l2") {
        config.probe.lr.l2 = parse("lr.l2", v)?;
    }
    if let Some(v) = file.get("rf.n_trees") {
        config.probe.rf.n_trees = parse("rf.n_trees", v)?;
    }
    if let Some(v) = file.get("rf.max_depth") {
        config.probe.rf.max_depth = parse("rf.max_depth", v)?;
    }
    if let Some(v) = file.get("rf.feature_subsample") {
        config.probe.rf.feature_subsample = match v.as_str() {
            "sqrt" => FeatureSubsample::Sqrt,
            "all" => FeatureSubsample::All,
            frac => FeatureSubsample::Fraction(parse("rf.feature_subsample", frac)?),
        };
    }
    if let Some(v) = file.get("rf.bootstrap") {
        config.probe.rf.bootstrap = parse("rf.bootstrap", v)?;
    }
    if let Some(metric) = pick("metric", &overrides.metric) {
        config.metric = parse::<MetricKind>("metric", &metric)?;
    }
    if let Some(seed) = overrides.seed.map(Ok).or_else(|| {
        file.get("master_seed")
            .map(|v| parse::<u64>("master_seed", v))
    }) {
        config.master_seed = seed?;
    }
    if let Some(tau) = overrides
        .tau
        .map(Ok)
        .or_else(|| file.get("tau").map(|v| parse::<f64>("tau", v)))
    {
        config.tau = tau?;
    }
    if let Some(min) = overrides.min_interval_records.map(Ok).or_else(|| {
        file.get("min_interval_records")
            .map(|v| parse::<usize>("min_interval_records", v))
    }) {
        config.min_interval_records = min?;
    }

    let known = [
        "intervals",
        "range",
        "bins",
        "m",
        "k",
        "probe",
        "lr.learning_rate",
        "lr.epochs",
        "lr.l2",
        "rf.n_trees",
        "rf.max_depth",
        "rf.feature_subsample",
        "rf.bootstrap",
        "metric",
        "master_seed",
        "tau",
        "min_interval_records",
    ];
    for key in file.keys() {
        if !known.contains(&key.as_str()) {
            return Err(CliError::config(format!("unknown config key {key:?}")));
        }
    }

    config.validate().map_err(CliError::from)?;
    Ok(config)
}
