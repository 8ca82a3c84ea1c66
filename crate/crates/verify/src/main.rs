use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hermite_series::experiments::{emit_tables, exit_code, format_float, run, ExperimentConfig, ExperimentKind};
use hermite_series::Error;

/// Runs one verification experiment and writes `<experiment>.csv` and
/// `<experiment>.summary.json`.
///
/// Exit status: 0 when every row passes, 1 when some row fails, 2 on a
/// configuration error, 3 when the mode budget is exceeded.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Cli {
    /// spectral-bound, lp-rates, alpha-star, square-function, salem-zygmund,
    /// continuity, modulus or bernstein-probe.
    experiment: ExperimentKind,

    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,

    /// Master seed; overrides the config.
    #[arg(long, env = "VERIFY_SEED")]
    seed: Option<u64>,

    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Number of Monte Carlo trials; overrides the config.
    #[arg(long)]
    trials: Option<usize>,

    /// Largest number of modes an experiment may evaluate.
    #[arg(long)]
    budget_modes: Option<u64>,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut config = ExperimentConfig::load(&cli.config)?;
    if config.experiment != cli.experiment {
        return Err(Error::Config(format!(
            "config is for '{}', not '{}'",
            config.experiment, cli.experiment
        )));
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output.dir = Some(out.clone());
    }
    if cli.trials.is_some() {
        config.trials = cli.trials;
    }
    if cli.budget_modes.is_some() {
        config.output.budget_modes = cli.budget_modes;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = load(&cli).and_then(|config| run(&config));
    match &outcome {
        Ok(report) => {
            for row in &report.rows {
                println!(
                    "{} {} measured={} predicted={} tolerance={}",
                    if row.passed() { "PASS" } else { "FAIL" },
                    row.params,
                    format_float(row.measured),
                    format_float(row.predicted),
                    format_float(row.tolerance),
                );
            }
            match emit_tables(report, &report.config.output_dir()) {
                Ok(files) => println!("wrote {} and {}", files.csv.display(), files.summary.display()),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(exit_code(&outcome) as u8)
}
