//! Pseudo-label discrepancy (SUDO) evaluation of probabilistic classifiers
//! on unlabeled, possibly distribution-shifted data.
//!
//! Given a model's output probabilities on wild data plus a labelled
//! train/held-out corpus, the engine quantifies per-probability-interval
//! class contamination without wild ground truth: records sampled from an
//! interval are temporarily assigned each candidate class in turn, a probe
//! classifier is trained against ground-truth records of the opposite
//! class, and the held-out performance gap between the assignments (the
//! discrepancy, or sudo) tells how pure the interval is and which class
//! dominates it.
//!
//! On top of the engine sit reliability-completeness curves for label-free
//! model ranking ([`rc`]), group-stratified audits for algorithmic bias
//! ([`bias`]), Kaplan-Meier survival validation ([`survival`]), hidden-label
//! oracles for desk-scale verification ([`oracle`]), and a simulation lab
//! that regenerates the synthetic source/wild scenarios the validation
//! suite is built on ([`sim`]).
//!
//! ```
//! use sudo_eval::inference::{apply_inference_model, fit_inference_model};
//! use sudo_eval::probe::LrConfig;
//! use sudo_eval::sim::{generate_source, generate_wild, SimulationConfig};
//! use sudo_eval::{run_sudo, SudoRunConfig};
//!
//! let sim = SimulationConfig::default();
//! let (train, held_out) = generate_source(&sim)?;
//! let (wild, _hidden) = generate_wild(&sim)?;
//!
//! // The inference model under evaluation scores the wild records.
//! let model = fit_inference_model(&train, &LrConfig::default())?;
//! let wild = apply_inference_model(&model, &wild)?;
//!
//! let report = run_sudo(&wild, &train, &held_out, &SudoRunConfig::default())?;
//! assert_eq!(report.intervals.len(), 10);
//! for interval in report.evaluated() {
//!     let detail = interval.detail.as_ref().unwrap();
//!     println!(
//!         "({:.1}, {:.1}] sudo {:+.3} majority {} {}",
//!         interval.lo,
//!         interval.hi,
//!         detail.sudo,
//!         detail.majority_class,
//!         if detail.reliable { "reliable" } else { "unreliable" },
//!     );
//! }
//! # Ok::<(), sudo_eval::Error>(())
//! ```

pub mod bias;
pub mod data;
pub mod engine;
pub mod error;
pub mod inference;
pub mod metrics;
pub mod oracle;
pub mod probe;
pub mod rc;
pub mod rng;
pub mod sim;
pub mod survival;
pub mod text;

pub use data::{CsvSchema, Dataset, DatasetRole, PredictionRecord, SidecarLabels};
pub use engine::{
    discretize, resolve_sample_size, run_sudo, run_sudo_multiclass, IntervalScheme, SampleSize,
    SudoReport, SudoRunConfig,
};
pub use error::{Error, Result};
pub use metrics::{auc, rank_correlation, threshold_metrics, CorrelationKind, MetricKind};
pub use probe::{train_probe, ProbeFamily, ProbeSpec, TrainedProbe};
pub use rc::{
    build_rc_curve, completeness, default_pairs, reliability, selective_predict, RcCurve,
    ThresholdPair,
};
pub use survival::{kaplan_meier, stratified_survival, SurvivalCurve};
