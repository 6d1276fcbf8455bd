use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wconv_cli::{list_builtins, run_config, ExperimentConfig};
use wconv_core::Grid;

#[derive(Parser)]
#[command(name = "wconv", version, about = "Run checks on weighted convolution algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites of a JSON config.
    Run {
        config: PathBuf,
        /// Override the grid step.
        #[arg(long = "grid-h")]
        grid_h: Option<f64>,
        /// Override the grid horizon.
        #[arg(long = "grid-T")]
        grid_t: Option<f64>,
        /// Override the seed for randomized checks.
        #[arg(long)]
        seed: Option<u64>,
        /// Write report.json and per-suite CSVs here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the catalog of descriptor kinds and checks.
    List,
}

const CONFIG_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            let text = serde_json::to_string_pretty(&list_builtins()).expect("catalog serializes");
            println!("{text}");
            ExitCode::SUCCESS
        }
        Command::Run { config, grid_h, grid_t, seed, out } => {
            let mut cfg = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return config_error(e),
            };
            if grid_h.is_some() || grid_t.is_some() {
                let h = grid_h.unwrap_or(cfg.grid.step());
                let t = grid_t.unwrap_or(cfg.grid.horizon());
                cfg.grid = match Grid::new(h, t) {
                    Ok(g) => g,
                    Err(e) => return config_error(e),
                };
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = match run_config(&cfg) {
                Ok(r) => r,
                Err(e) => return config_error(e),
            };
            match out {
                Some(dir) => {
                    if let Err(e) = report.write_dir(&dir) {
                        eprintln!("error: cannot write {}: {e}", dir.display());
                        return ExitCode::from(CONFIG_ERROR);
                    }
                }
                None => print!("{}", report.to_json()),
            }
            for s in report.suites.iter().filter(|s| s.status != wconv_cli::Status::Pass) {
                eprintln!("suite {} {:?}{}", s.name, s.status, s.error.as_deref().map(|e| format!(": {e}")).unwrap_or_default());
            }
            ExitCode::from(report.exit_code() as u8)
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {e}");
    ExitCode::from(CONFIG_ERROR)
}
