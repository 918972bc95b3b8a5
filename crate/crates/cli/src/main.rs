use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vba_isac::harness::{run_to_dir, Experiment, ScenarioConfig, DEFAULTS};
use vba_isac::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "vba-isac", version, about = "Joint sensing and communication beamforming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted trajectory and area-of-interest disks.
    Aoi(RunArgs),
    /// Radar target, uniform benchmark and trade-off beampatterns.
    Beampattern(RunArgs),
    /// Spectral efficiency against SNR and trade-off weight.
    SeSweep(RunArgs),
    /// Energy efficiency of full-digital and hybrid designs.
    EeSweep(RunArgs),
    /// Spectral efficiency under unknown channel variation.
    TvSweep(RunArgs),
    /// Print the embedded default scenario.
    PrintDefaults,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the CSV file.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides `sweep.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn load_config(args: &RunArgs) -> Result<ScenarioConfig, String> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            ScenarioConfig::from_toml(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.sweep.master_seed = seed;
    }
    Ok(cfg)
}

fn execute(experiment: Experiment, args: RunArgs) -> ExitCode {
    let cfg = match load_config(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match pool.install(|| run_to_dir(experiment, &cfg, &args.out)) {
        Ok(path) => {
            eprintln!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let config_error = match &e {
                Error::Experiment { source, .. } => matches!(**source, Error::Config(_)),
                other => matches!(other, Error::Config(_)),
            };
            ExitCode::from(if config_error { EXIT_CONFIG } else { EXIT_SOLVER })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Aoi(a) => execute(Experiment::Aoi, a),
        Command::Beampattern(a) => execute(Experiment::Beampattern, a),
        Command::SeSweep(a) => execute(Experiment::SeSweep, a),
        Command::EeSweep(a) => execute(Experiment::EeSweep, a),
        Command::TvSweep(a) => execute(Experiment::TvSweep, a),
        Command::PrintDefaults => {
            print!("{DEFAULTS}");
            ExitCode::SUCCESS
        }
    }
}
