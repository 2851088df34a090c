use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use pmit_cli::{run, CliError, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Command {
    #[value(alias = "gamma-scaling")]
    GammaScaling,
    Distribution,
    #[value(alias = "spl-depth-sweep")]
    SplDepthSweep,
    #[value(alias = "vqe-grouping")]
    VqeGrouping,
    #[value(alias = "mbqc-gamma")]
    MbqcGamma,
    #[value(alias = "ising-magnetization")]
    IsingMagnetization,
    #[value(alias = "mcmc-convergence")]
    McmcConvergence,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::GammaScaling => "gamma_scaling",
            Command::Distribution => "distribution",
            Command::SplDepthSweep => "spl_depth_sweep",
            Command::VqeGrouping => "vqe_grouping",
            Command::MbqcGamma => "mbqc_gamma",
            Command::IsingMagnetization => "ising_magnetization",
            Command::McmcConvergence => "mcmc_convergence",
        }
    }
}

/// Propagated probabilistic error cancellation experiments.
#[derive(Debug, Parser)]
#[command(name = "pmit", version)]
struct Args {
    /// Experiment to run; must match the config's `experiment` field.
    command: Command,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (default: the config's `output_path`, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: Args) -> Result<(), CliError> {
    if let Ok(n) = std::env::var("PMIT_THREADS") {
        let n: usize = n.parse().map_err(|_| CliError::Config(format!("PMIT_THREADS = {n:?} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let mut config = ExperimentConfig::load(&args.config)?;
    if config.name() != args.command.name() {
        return Err(CliError::Config(format!("command {} does not match config experiment {}", args.command.name(), config.name())));
    }
    if let Some(s) = args.seed {
        *config.seed_mut() = s;
    }
    if args.out.is_some() {
        *config.output_path_mut() = args.out;
    }
    let report = run(&config)?;
    match config.output_path_mut().clone() {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            report.write(&config, &mut f)?;
        }
        None => report.write(&config, &mut std::io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pmit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
