use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use sudo_eval::data::DatasetRole;
use sudo_eval::survival::{stratified_survival, StratifiedSurvival, Stratum, SurvivalCorrelation};

use crate::cli_error::{CliError, CliResult};
use crate::commands::{load_report, SchemaArgs};
use crate::manifest::{digest_file, RunManifest};
use crate::output::{ensure_dir, step_svg, write_atomic};

/// Kaplan-Meier curves per probability stratum of the wild data, plus the
/// sudo-versus-median-survival correlation when a report is supplied.
#[derive(Debug, Args)]
pub struct SurvivalArgs {
    /// Wild CSV with p, time and event columns
    #[arg(long)]
    pub wild: PathBuf,
    /// Strata as `label:lo:hi,...` over (lo, hi]
    #[arg(long, default_value = "low:0:0.2,uncertain:0.2:0.5,high:0.5:1")]
    pub strata: String,
    /// report.json from a previous `run` to correlate against
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub schema: SchemaArgs,
}

fn parse_strata(spec: &str) -> CliResult<Vec<Stratum>> {
    spec.split(',')
        .map(|part| {
            let fields: Vec<&str> = part.split(':').collect();
            if fields.len() != 3 {
                return Err(CliError::config(format!(
                    "stratum {part:?} must be `label:lo:hi`"
                )));
            }
            let parse = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::config(format!("stratum bound {v:?} is not a number")))
            };
            Ok(Stratum {
                label: fields[0].trim().to_string(),
                lo: parse(fields[1])?,
                hi: parse(fields[2])?,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct SurvivalDocument {
    manifest: RunManifest,
    stratified: StratifiedSurvival,
    correlation: Option<SurvivalCorrelation>,
}

pub fn run(args: &SurvivalArgs) -> CliResult<()> {
    let wild = args.schema.load(&args.wild, DatasetRole::Wild)?;
    let strata = parse_strata(&args.strata)?;
    let stratified = stratified_survival(&wild, &strata)?;

    let correlation = match &args.report {
        Some(path) => {
            let report = load_report(path)?;
            Some(sudo_eval::survival::correlate_sudo_with_survival(
                &report, &wild,
            )?)
        }
        None => None,
    };

    let mut inputs = vec![digest_file(&args.wild)?];
    if let Some(path) = &args.report {
        inputs.push(digest_file(path)?);
    }
    let manifest = RunManifest::new(None, inputs, serde_json::json!({ "strata": strata }));

    ensure_dir(&args.out)?;
    let document = SurvivalDocument {
        manifest,
        stratified,
        correlation,
    };
    write_atomic(
        args.out.join("survival.json"),
        &serde_json::to_string_pretty(&document).expect("survival report serializes"),
    )?;

    let mut csv = String::from("stratum,t,survival,at_risk,events\n");
    for (label, curve) in &document.stratified.curves {
        if let Some(curve) = curve {
            for (((t, s), n), d) in curve
                .event_times
                .iter()
                .zip(&curve.survival_prob)
                .zip(&curve.at_risk)
                .zip(&curve.events)
            {
                csv.push_str(&format!("{label},{t},{s},{n},{d}\n"));
            }
        }
    }
    write_atomic(args.out.join("survival_curves.csv"), &csv)?;

    let paths: Vec<(String, Vec<(f64, f64)>)> = document
        .stratified
        .curves
        .iter()
        .filter_map(|(label, curve)| {
            curve.as_ref().map(|c| {
                (
                    label.clone(),
                    c.event_times
                        .iter()
                        .copied()
                        .zip(c.survival_prob.iter().copied())
                        .collect(),
                )
            })
        })
        .collect();
    write_atomic(
        args.out.join("survival.svg"),
        &step_svg(&paths, "time", "survival"),
    )?;

    for warning in &document.stratified.warnings {
        eprintln!("warning: {warning}");
    }
    for (label, curve) in &document.stratified.curves {
        match curve {
            Some(curve) => println!(
                "survival: stratum {:?} n={} median={}",
                label,
                curve.subjects,
                curve
                    .median
                    .map_or("none".to_string(), |m| format!("{m:.4}"))
            ),
            None => println!("survival: stratum {label:?} empty"),
        }
    }
    if let Some(correlation) = &document.correlation {
        println!(
            "survival: sudo vs median-survival rho = {:+.4} over {} intervals",
            correlation.rho,
            correlation.intervals_used.len()
        );
    }
    Ok(())
}
