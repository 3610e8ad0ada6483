use std::path::PathBuf;

use clap::Args;
use sudo_eval::data::write_dataset;
use sudo_eval::inference::{apply_inference_model, fit_inference_model};
use sudo_eval::probe::LrConfig;
use sudo_eval::sim::{
    attach_exponential_survival, generate_source, generate_wild, inject_label_noise,
    SimulationConfig, WildScenario,
};

use crate::cli_error::{CliError, CliResult};
use crate::output::ensure_dir;

/// Writes a synthetic source domain (train + held-out), a shifted wild set
/// scored by a logistic inference model trained on the train split, and the
/// wild set's hidden labels as a sidecar file.
#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Wild-data scenario: shift | shift_imbalanced | shift_third_class
    #[arg(long, default_value = "shift")]
    pub scenario: WildScenario,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Fraction of held-out labels to flip
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 500)]
    pub n_train: usize,
    #[arg(long, default_value_t = 200)]
    pub n_held_out: usize,
    /// Epochs for the built-in logistic inference model
    #[arg(long, default_value_t = 200)]
    pub model_epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    pub model_lr: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub model_l2: f64,
    /// Attach class-hazard exponential survival columns to the wild set:
    /// `rate_low,rate_high,horizon`
    #[arg(long)]
    pub attach_survival: Option<String>,
}

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let config = SimulationConfig {
        seed: args.seed,
        n_train: args.n_train,
        n_held_out: args.n_held_out,
        scenario: args.scenario,
        label_noise_rate: args.noise,
        ..SimulationConfig::default()
    };
    let (train, held_out) = generate_source(&config)?;
    let (wild, hidden) = generate_wild(&config)?;

    let model = fit_inference_model(
        &train,
        &LrConfig {
            learning_rate: args.model_lr,
            epochs: args.model_epochs,
            l2: args.model_l2,
        },
    )?;
    let train = apply_inference_model(&model, &train)?;
    let mut held_out = apply_inference_model(&model, &held_out)?;
    let mut wild = apply_inference_model(&model, &wild)?;

    if args.noise > 0.0 {
        held_out = inject_label_noise(&held_out, args.noise, args.seed)?;
    }
    if let Some(spec) = &args.attach_survival {
        let parts: Vec<f64> = spec
            .split(',')
            .map(|v| {
                v.trim().parse::<f64>().map_err(|_| {
                    CliError::config(format!("--attach-survival {spec:?}: {v:?} is not a number"))
                })
            })
            .collect::<CliResult<_>>()?;
        if parts.len() != 3 {
            return Err(CliError::config(
                "--attach-survival expects `rate_low,rate_high,horizon`",
            ));
        }
        wild =
            attach_exponential_survival(&wild, &hidden, parts[0], parts[1], parts[2], args.seed)?;
    }

    ensure_dir(&args.out)?;
    write_dataset(&train, args.out.join("train.csv"))?;
    write_dataset(&held_out, args.out.join("held_out.csv"))?;
    write_dataset(&wild, args.out.join("wild.csv"))?;
    hidden.write(args.out.join("wild_labels.csv"))?;

    println!(
        "simulate: wrote train ({}), held_out ({}), wild ({}), wild_labels ({}) to {}",
        train.len(),
        held_out.len(),
        wild.len(),
        hidden.len(),
        args.out.display()
    );
    Ok(())
}
