use thiserror::Error;

/// Errors surfaced by dataset handling, probe training, metric evaluation
/// and the discrepancy engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error in {path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}:{line}: malformed row: {message}")]
    MalformedRow {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: probability {value} outside [0, 1]")]
    ProbabilityOutOfRange {
        path: String,
        line: usize,
        value: f64,
    },
    #[error("{path}:{line}: missing label required for role {role}")]
    MissingLabel {
        path: String,
        line: usize,
        role: String,
    },
    #[error("{path}:{line}: feature dimension {found} differs from first row's {expected}")]
    InconsistentDimension {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate record id {id:?}")]
    DuplicateId { id: String },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("invalid record {id:?}: {message}")]
    InvalidRecord { id: String, message: String },
    #[error("record {id:?} has no probability value but role {role} requires one")]
    MissingProbability { id: String, role: String },
    #[error("labels are not accessible on a wild dataset")]
    WildLabelsInaccessible,

    #[error("empty corpus")]
    EmptyCorpus,
    #[error("vocabulary size must be at least 1")]
    InvalidVocabSize,

    #[error("invalid simulation config: {0}")]
    InvalidSimulationConfig(String),
    #[error("label noise rate {0} outside [0, 1]")]
    InvalidNoiseRate(f64),
    #[error("label noise requires binary labels, found class {0}")]
    NonBinaryLabels(usize),

    #[error("training set contains a single class")]
    SingleClassTrainingSet,
    #[error("feature dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid probe config: {0}")]
    InvalidProbeConfig(String),

    #[error("metric requires both classes present")]
    SingleClassLabels,
    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("correlation needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("zero rank variance; correlation undefined")]
    ZeroRankVariance,
    #[error("metric {metric} undefined on this evaluation ({reason})")]
    MetricUndefined { metric: String, reason: String },

    #[error("interval boundaries must be strictly increasing within [0, 1]")]
    InvalidIntervals,
    #[error("invalid run config: {0}")]
    InvalidRunConfig(String),
    #[error(
        "requested m={requested} exceeds the {count} records of interval {index} ({lo}, {hi}]"
    )]
    SampleSizeTooLarge {
        requested: usize,
        index: usize,
        lo: f64,
        hi: f64,
        count: usize,
    },
    #[error("no evaluable interval (all empty or below the minimum record count)")]
    NoEvaluableInterval,
    #[error(
        "train pool opposite pseudo-label {pseudo_label} has {available} records, need {needed}"
    )]
    InsufficientTrainRecords {
        pseudo_label: usize,
        available: usize,
        needed: usize,
    },
    #[error("held-out set is missing class {0}")]
    HeldOutMissingClass(usize),
    #[error("train set is missing class {0}")]
    TrainMissingClass(usize),
    #[error("class count must be at least 2, got {0}")]
    InvalidClassCount(usize),

    #[error("invalid threshold pair: {0}")]
    InvalidThresholdPair(String),
    #[error("threshold {0} does not align with an evaluated interval edge")]
    UnalignedThreshold(f64),
    #[error("reliability-completeness curve needs at least 2 threshold pairs, got {0}")]
    TooFewPairs(usize),
    #[error("completeness span is zero; curve area undefined")]
    DegenerateCurve,

    #[error("bias audit needs at least 2 evaluable groups, found {0}")]
    TooFewGroups(usize),

    #[error("survival input is empty")]
    EmptySurvivalInput,
    #[error("negative survival time {0}")]
    NegativeSurvivalTime(f64),
    #[error("strata overlap or are malformed: {0}")]
    InvalidStrata(String),
    #[error("fewer than {needed} intervals with a computable median ({got} usable)")]
    TooFewSurvivalIntervals { needed: usize, got: usize },

    #[error("record {id:?} has no entry in the sidecar label file")]
    MissingHiddenLabel { id: String },
    #[error("report and contamination profile cover different intervals")]
    MisalignedIntervals,
}

pub type Result<T> = std::result::Result<T, Error>;
