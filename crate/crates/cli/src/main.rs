//! Batch pipelines for pseudo-label discrepancy evaluation: dataset
//! simulation, engine runs, reliability-completeness curves, bias audits,
//! survival validation, hidden-label checks and text featurization.

mod cli_error;
mod commands;
mod config;
mod manifest;
mod output;

use clap::{Parser, Subcommand};

use cli_error::CliResult;

#[derive(Parser)]
#[command(
    name = "sudo-eval",
    version,
    about = "Evaluate probabilistic models on unlabeled, shifted data via pseudo-label discrepancy"
)]
struct Cli {
    /// Worker threads for the engine grid (0 = rayon default). Results are
    /// identical for any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic source/wild datasets
    Simulate(commands::simulate::SimulateArgs),
    /// Run the discrepancy engine over a wild set
    Run(commands::run::RunArgs),
    /// Build a reliability-completeness curve from a report
    RcCurve(commands::rc_curve::RcCurveArgs),
    /// Group-stratified discrepancy audit
    Bias(commands::bias::BiasArgs),
    /// Kaplan-Meier curves per probability stratum
    Survival(commands::survival::SurvivalArgs),
    /// Check a report against hidden ground-truth labels
    Validate(commands::validate::ValidateArgs),
    /// Bigram bag-of-words featurization of raw text
    Featurize(commands::featurize::FeaturizeArgs),
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Run(args) => commands::run::run(args),
        Command::RcCurve(args) => commands::rc_curve::run(args),
        Command::Bias(args) => commands::bias::run(args),
        Command::Survival(args) => commands::survival::run(args),
        Command::Validate(args) => commands::validate::run(args),
        Command::Featurize(args) => commands::featurize::run(args),
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = if cli.threads > 0 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(cli_error::CliError::Config(format!(
                "cannot build thread pool: {e}"
            ))),
        }
    } else {
        dispatch(&cli)
    };
    if let Err(err) = outcome {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
