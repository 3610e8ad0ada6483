use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use sudo_eval::data::DatasetRole;
use sudo_eval::rc::{build_rc_curve, default_pairs, RcCurve, ThresholdPair};

use crate::cli_error::{CliError, CliResult};
use crate::commands::{load_report, SchemaArgs};
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, polyline_svg, write_atomic};

/// Builds the reliability-completeness curve of a prior report over the
/// wild set it was computed from.
#[derive(Debug, Args)]
pub struct RcCurveArgs {
    /// report.json from a previous `run`
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long)]
    pub wild: PathBuf,
    /// Threshold pairs `a1,a2|b1,b2;...`; default sweeps the report's
    /// interval edges from strictest to loosest
    #[arg(long)]
    pub pairs: Option<String>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub schema: SchemaArgs,
}

fn parse_pairs(spec: &str) -> CliResult<Vec<ThresholdPair>> {
    spec.split(';')
        .map(|pair| {
            let (low, high) = pair
                .split_once('|')
                .ok_or_else(|| CliError::config(format!("pair {pair:?} must be `lows|highs`")))?;
            let parse_list = |side: &str| -> CliResult<Vec<f64>> {
                side.split(',')
                    .map(|v| {
                        v.trim().parse::<f64>().map_err(|_| {
                            CliError::config(format!("threshold {v:?} is not a number"))
                        })
                    })
                    .collect()
            };
            ThresholdPair::new(parse_list(low)?, parse_list(high)?).map_err(CliError::from)
        })
        .collect()
}

#[derive(Serialize)]
struct RcDocument {
    manifest: RunManifest,
    curve: RcCurve,
}

pub fn run(args: &RcCurveArgs) -> CliResult<()> {
    let report = load_report(&args.report)?;
    let wild = args.schema.load(&args.wild, DatasetRole::Wild)?;
    let pairs = match &args.pairs {
        Some(spec) => parse_pairs(spec)?,
        None => default_pairs(&report)?,
    };
    let curve = build_rc_curve(&report, &wild, &pairs)?;

    let manifest = RunManifest::new(
        Some(report.master_seed),
        vec![digest_file(&args.report)?, digest_file(&args.wild)?],
        serde_json::json!({ "pairs": pairs }),
    );
    ensure_dir(&args.out)?;
    let document = RcDocument { manifest, curve };
    write_atomic(
        args.out.join("rc_curve.json"),
        &serde_json::to_string_pretty(&document).expect("curve serializes"),
    )?;

    let mut csv = String::from("completeness,reliability\n");
    for point in &document.curve.points {
        csv.push_str(&format!("{},{}\n", point.completeness, point.reliability));
    }
    write_atomic(args.out.join("rc_curve.csv"), &csv)?;

    let points: Vec<(f64, f64)> = document
        .curve
        .points
        .iter()
        .map(|p| (p.completeness, p.reliability))
        .collect();
    write_atomic(
        args.out.join("rc_curve.svg"),
        &polyline_svg(&points, "completeness", "reliability"),
    )?;

    println!(
        "rc-curve: aurcc = {:.4} over {} pairs, outputs in {}",
        document.curve.aurcc,
        document.curve.pair_count,
        args.out.display()
    );
    Ok(())
}
