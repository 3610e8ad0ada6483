use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use sudo_eval::data::{DatasetRole, SidecarLabels};
use sudo_eval::engine::IntervalScheme;
use sudo_eval::oracle::{
    contamination_profile, validate_correlation, ContaminationProfile, CorrelationCheck,
};

use crate::cli_error::CliResult;
use crate::commands::{load_report, SchemaArgs};
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, write_atomic};

/// Checks a report against hidden ground truth: per-interval contamination
/// from the sidecar labels and the Spearman correlation with sudo.
#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// report.json from a previous `run`
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub wild: PathBuf,
    /// Sidecar hidden-label file (id,label)
    #[arg(long)]
    pub labels: PathBuf,
    /// Pass when rho is at or below this bound
    #[arg(long, default_value_t = -0.8, allow_hyphen_values = true)]
    pub bound: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub schema: SchemaArgs,
}

#[derive(Serialize)]
struct ValidationDocument {
    manifest: RunManifest,
    profile: ContaminationProfile,
    check: CorrelationCheck,
}

pub fn run(args: &ValidateArgs) -> CliResult<()> {
    let report = load_report(&args.report)?;
    let wild = args.schema.load(&args.wild, DatasetRole::Wild)?;
    let hidden = SidecarLabels::load(&args.labels)?;
    let intervals = IntervalScheme::from_boundaries(report.boundaries.clone())?;
    let profile = contamination_profile(&wild, &hidden, &intervals)?;
    let check = validate_correlation(&report, &profile, args.bound)?;

    let manifest = RunManifest::new(
        Some(report.master_seed),
        vec![
            digest_file(&args.report)?,
            digest_file(&args.wild)?,
            digest_file(&args.labels)?,
        ],
        serde_json::json!({ "bound": args.bound }),
    );
    ensure_dir(&args.out)?;
    let document = ValidationDocument {
        manifest,
        profile,
        check,
    };
    write_atomic(
        args.out.join("validation.json"),
        &serde_json::to_string_pretty(&document).expect("validation serializes"),
    )?;

    println!(
        "validate: rho = {:+.4} over {} intervals, bound {:+.2} -> {}",
        document.check.rho,
        document.check.intervals_used,
        document.check.bound,
        if document.check.pass { "pass" } else { "fail" }
    );
    Ok(())
}
