use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use sudo_eval::bias::{
    run_bias_audit, validate_bias_with_labels, BiasReport, GroupNpv, GroupOutcome,
};
use sudo_eval::data::{DatasetRole, SidecarLabels};

use crate::cli_error::CliResult;
use crate::commands::SchemaArgs;
use crate::config::{resolve_run_config, RunOverrides};
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, write_atomic};

/// Group-stratified discrepancy audit over the wild set's group column,
/// optionally validated with hidden labels (per-group NPV).
#[derive(Debug, Args)]
pub struct BiasArgs {
    #[arg(long)]
    pub wild: PathBuf,
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub held_out: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sidecar hidden-label file enabling NPV validation
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Decision threshold for the NPV validation
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub intervals: Option<String>,
    #[arg(long)]
    pub range: Option<String>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub probe: Option<String>,
    #[arg(long)]
    pub metric: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[command(flatten)]
    pub schema: SchemaArgs,
}

#[derive(Serialize)]
struct BiasDocument {
    manifest: RunManifest,
    bias: BiasReport,
    npv: Option<Vec<GroupNpv>>,
}

pub fn run(args: &BiasArgs) -> CliResult<()> {
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
        min_interval_records: None,
    };
    let config = resolve_run_config(args.config.as_deref(), &overrides)?;

    let wild = args.schema.load(&args.wild, DatasetRole::Wild)?;
    let train = args.schema.load(&args.train, DatasetRole::Train)?;
    let held_out = args.schema.load(&args.held_out, DatasetRole::HeldOut)?;

    let bias = run_bias_audit(&wild, &train, &held_out, &config)?;
    let npv = match &args.labels {
        Some(path) => {
            let hidden = SidecarLabels::load(path)?;
            Some(validate_bias_with_labels(&wild, &hidden, args.threshold)?)
        }
        None => None,
    };

    let mut inputs = vec![
        digest_file(&args.wild)?,
        digest_file(&args.train)?,
        digest_file(&args.held_out)?,
    ];
    if let Some(path) = &args.labels {
        inputs.push(digest_file(path)?);
    }
    let manifest = RunManifest::new(
        Some(config.master_seed),
        inputs,
        serde_json::to_value(&config).expect("config serializes"),
    );

    ensure_dir(&args.out)?;
    let document = BiasDocument {
        manifest,
        bias,
        npv,
    };
    write_atomic(
        args.out.join("bias.json"),
        &serde_json::to_string_pretty(&document).expect("bias report serializes"),
    )?;

    let mut csv = String::from("group,interval,lo,hi,sudo,majority_class,reliable\n");
    for (group, report) in document.bias.evaluated_groups() {
        for interval in report.evaluated() {
            let d = interval.detail.as_ref().expect("evaluated");
            csv.push_str(&format!(
                "{group},{},{},{},{},{},{}\n",
                interval.index, interval.lo, interval.hi, d.sudo, d.majority_class, d.reliable
            ));
        }
    }
    write_atomic(args.out.join("bias.csv"), &csv)?;

    for warning in &document.bias.warnings {
        eprintln!("warning: {warning}");
    }
    for group in &document.bias.groups {
        match &group.outcome {
            GroupOutcome::Evaluated(report) => {
                let sudo: Vec<String> = report
                    .evaluated()
                    .map(|i| format!("{:+.4}", i.detail.as_ref().expect("evaluated").sudo))
                    .collect();
                println!("bias: group {:?} sudo [{}]", group.group, sudo.join(", "));
            }
            GroupOutcome::Skipped { reason } => {
                println!("bias: group {:?} skipped ({reason})", group.group);
            }
        }
    }
    if let Some(npv) = &document.npv {
        for group in npv {
            match group.npv {
                Some(value) => println!("bias: group {:?} npv {:.4}", group.group, value),
                None => println!(
                    "bias: group {:?} npv undefined (no predicted negatives)",
                    group.group
                ),
            }
        }
    }
    Ok(())
}
