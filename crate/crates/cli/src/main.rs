//! `zeno-opt`: decay-rate sweeps under optimal projective measurements.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use zeno_opt::config::{BathCheckConfig, ExperimentConfig};
use zeno_opt::{presets, run, CliError};

#[derive(Parser)]
#[command(
    name = "zeno-opt",
    version,
    about = "Survival-probability sweeps and optimal projective measurements \
             for open-system Zeno/anti-Zeno analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a decay-rate sweep from a config file; writes CSV + manifest.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a frozen figure-reproduction preset into an output directory.
    Preset {
        /// One of: fig1, fig2a, fig2b, fig3a, fig3b, fig4a, fig4b,
        /// fig5a-fig5d, fig6a, fig6b.
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Report the population-decay Bloch flip time tau*.
    FlipTime {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare the bath quadrature against Ohmic closed forms.
    BathCheck {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_config(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::parse(&read_config(&config)?)?;
            run::run_sweep_to_files(&cfg, "sweep", None)
        }
        Command::Preset { name, out } => {
            let Some(mut cfg) = presets::preset(&name) else {
                return Err(CliError::Config(format!(
                    "unknown preset '{name}' (expected one of {})",
                    presets::PRESET_NAMES.join(", ")
                )));
            };
            cfg.out = out.join(cfg.out.file_name().unwrap());
            run::run_sweep_to_files(&cfg, "preset", Some(&name))
        }
        Command::FlipTime { config } => {
            let cfg = ExperimentConfig::parse(&read_config(&config)?)?;
            run::run_flip_time(&cfg)
        }
        Command::BathCheck { config } => {
            let cfg = BathCheckConfig::parse(&read_config(&config)?)?;
            run::run_bath_check(&cfg)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ZENO_OPT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("config error: ZENO_OPT_THREADS = '{threads}' is not a positive integer");
                return ExitCode::from(1);
            }
        }
    }

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
