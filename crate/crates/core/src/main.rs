use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shelfwave::config::ScenarioConfig;
use shelfwave::runner::{run_scenario, run_sweep, write_sweep_csv};
use shelfwave::{Error, Result};

/// Shelf-wave spectra on straight and curved coasts.
#[derive(Parser)]
#[command(name = "shelfwave", version)]
struct Cli {
    /// Output directory (overrides SHELFWAVE_OUT_DIR and the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run { config: PathBuf },
    /// Run a scenario for each value of one scalar parameter.
    Sweep {
        config: PathBuf,
        /// Parameter path, e.g. `curvature.params[0]` or `strip2d.L`.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn output_dir(cli: Option<&Path>, cfg: &ScenarioConfig, config_path: &Path) -> PathBuf {
    if let Some(p) = cli {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os("SHELFWAVE_OUT_DIR").filter(|p| !p.is_empty()) {
        return PathBuf::from(p);
    }
    let dir = Path::new(&cfg.outputs.dir);
    if dir.is_absolute() {
        dir.to_path_buf()
    } else {
        config_path.parent().unwrap_or(Path::new(".")).join(dir)
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::load(config)?;
            let dir = output_dir(cli.out.as_deref(), &cfg, config);
            let report = run_scenario(&cfg, &dir)?;
            println!("Omega* = {:.10e}", report.band.omega_star);
            if let Some(g) = report.gap {
                println!("omega_1 - Omega* = {g:.10e}, candidates: {}", report.candidates.len());
            }
            Ok(())
        }
        Command::Sweep { config, param, values, jobs } => {
            let cfg = ScenarioConfig::load(config)?;
            let dir = output_dir(cli.out.as_deref(), &cfg, config);
            let rows = run_sweep(&cfg, param, values, *jobs)?;
            let path = dir.join("sweep.csv");
            write_sweep_csv(&rows, &path)?;
            log::info!("wrote {}", path.display());
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            for r in rows.iter().filter(|r| !r.is_ok()) {
                if let Err(e) = &r.outcome {
                    log::warn!("{param} = {}: {e}", r.value);
                }
            }
            if failed == rows.len() {
                return Err(Error::Config(format!("all {failed} sweep rows failed")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
