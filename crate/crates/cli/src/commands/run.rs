use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use sudo_eval::data::DatasetRole;
use sudo_eval::engine::{report_to_csv, run_sudo, run_sudo_multiclass, SudoReport};

use crate::cli_error::{CliError, CliResult};
use crate::commands::SchemaArgs;
use crate::config::{resolve_run_config, RunOverrides};
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, write_atomic};

/// Runs the discrepancy engine over a wild set against a labelled
/// train/held-out corpus, emitting report.json and report.csv.
#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub wild: PathBuf,
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub held_out: PathBuf,
    /// `key = value` run-configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Class count; above 2 selects the multi-class path
    #[arg(long, default_value_t = 2)]
    pub classes: usize,
    /// Explicit interval boundaries, comma-separated
    #[arg(long)]
    pub intervals: Option<String>,
    /// Covered range `lo,hi` for equal-width bins
    #[arg(long)]
    pub range: Option<String>,
    /// Equal-width bin count
    #[arg(long)]
    pub bins: Option<usize>,
    /// Per-interval sample count, or `auto`
    #[arg(long)]
    pub m: Option<String>,
    /// Repeats per interval and pseudo-label
    #[arg(long)]
    pub k: Option<usize>,
    /// Probe family: logistic_regression | random_forest
    #[arg(long)]
    pub probe: Option<String>,
    /// Held-out metric: auc | accuracy | precision | recall | npv
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Unreliability cutoff on |sudo|
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub min_interval_records: Option<usize>,
    #[command(flatten)]
    pub schema: SchemaArgs,
}

#[derive(Serialize)]
struct ReportDocument {
    manifest: RunManifest,
    report: SudoReport,
}

pub fn run(args: &RunArgs) -> CliResult<()> {
    let overrides = RunOverrides {
        intervals: args.intervals.clone(),
        range: args.range.clone(),
        bins: args.bins,
        m: args.m.clone(),
        k: args.k,
        probe: args.probe.clone(),
        metric: args.metric.clone(),
        seed: args.seed,
        tau: args.tau,
        min_interval_records: args.min_interval_records,
    };
    let config = resolve_run_config(args.config.as_deref(), &overrides)?;
    if args.classes < 2 {
        return Err(CliError::config("--classes must be at least 2"));
    }

    let wild = args.schema.load(&args.wild, DatasetRole::Wild)?;
    let train = args.schema.load(&args.train, DatasetRole::Train)?;
    let held_out = args.schema.load(&args.held_out, DatasetRole::HeldOut)?;

    let report = if args.classes == 2 {
        run_sudo(&wild, &train, &held_out, &config)?
    } else {
        run_sudo_multiclass(&wild, &train, &held_out, &config, args.classes)?
    };

    let manifest = RunManifest::new(
        Some(config.master_seed),
        vec![
            digest_file(&args.wild)?,
            digest_file(&args.train)?,
            digest_file(&args.held_out)?,
        ],
        serde_json::to_value(&config).expect("config serializes"),
    );
    ensure_dir(&args.out)?;
    let document = ReportDocument { manifest, report };
    let json = serde_json::to_string_pretty(&document).expect("report serializes");
    write_atomic(args.out.join("report.json"), &json)?;
    write_atomic(
        args.out.join("report.csv"),
        &report_to_csv(&document.report),
    )?;

    for warning in &document.report.warnings {
        eprintln!("warning: {warning}");
    }
    let evaluated = document.report.evaluated().count();
    println!(
        "run: {evaluated}/{} intervals evaluated (m = {}, k = {}), reports in {}",
        document.report.intervals.len(),
        document.report.m_resolved,
        document.report.k,
        args.out.display()
    );
    for interval in document.report.evaluated() {
        let d = interval.detail.as_ref().expect("evaluated");
        println!(
            "  ({:.3}, {:.3}] n={:<5} sudo={:+.4} majority={} {}",
            interval.lo,
            interval.hi,
            interval.wild_count,
            d.sudo,
            d.majority_class,
            if d.reliable { "reliable" } else { "unreliable" }
        );
    }
    Ok(())
}
