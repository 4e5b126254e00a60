use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hobo_lab::runner::execute;
use hobo_lab::{ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(name = "hobo-lab", version, about = "Pseudo-spectral experiments for the higher-order Benjamin-Ono equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML config, or a manifest.json from an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; nothing is written without it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Run the epsilon sweep with incompatible coefficients.
    #[arg(long, global = true)]
    override_compat: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Integrate one trajectory; write snapshots and observables.
    Simulate,
    /// HBO-to-BO distance over the epsilon ladder.
    SweepEpsilon,
    /// Compare a run with its rescaled counterpart.
    ScalingCheck,
    /// Mass and energy drift.
    Conservation,
    /// Perturbation growth against the perturbation size.
    FlowmapContinuity,
    /// Gauge-transform recovery residuals along a trajectory.
    GaugeDiagnose,
    /// Print the model coefficients.
    Coeffs,
}

impl From<Command> for ExperimentKind {
    fn from(c: Command) -> Self {
        match c {
            Command::Simulate => ExperimentKind::Simulate,
            Command::SweepEpsilon => ExperimentKind::EpsilonSweep,
            Command::ScalingCheck => ExperimentKind::ScalingCheck,
            Command::Conservation => ExperimentKind::Conservation,
            Command::FlowmapContinuity => ExperimentKind::FlowmapContinuity,
            Command::GaugeDiagnose => ExperimentKind::GaugeDiagnose,
            Command::Coeffs => ExperimentKind::Coeffs,
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    cfg.threads = cli.threads;
    cfg.override_compat |= cli.override_compat;
    let outcome = execute(cli.command.into(), &cfg)?;
    for line in &outcome.summary {
        println!("{line}");
    }
    if let Some(path) = &outcome.manifest {
        println!("manifest: {}", path.display());
    }
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
