//! Command-line runner for the bundled transfer scenarios.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use snac_core::scenario::{builtin, builtin_ids, ScenarioConfig};
use snac_core::sweep::{run_scenario_to_dir, ExecMode};

#[derive(Parser)]
#[command(
    name = "snacsim",
    version,
    about = "Pulse design and dynamics simulation for jump-along-geodesics adiabatic transfer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write CSV/JSON (and SVG) results.
    Run {
        /// Scenario id (see `list-scenarios`) or the id of the config file.
        scenario: String,
        /// TOML config replacing the built-in definition.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the number of seeds in the ensemble.
        #[arg(long)]
        seeds: Option<u64>,
        /// Worker threads for the sweep pool (0 = all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the built-in scenarios.
    ListScenarios,
    /// Parse and validate a scenario config file.
    Validate { config: PathBuf },
}

fn load_scenario(name: &str, config: &Option<PathBuf>) -> anyhow::Result<ScenarioConfig> {
    match config {
        Some(path) => {
            let cfg = ScenarioConfig::load(path)
                .with_context(|| format!("loading {}", path.display()))?;
            if cfg.id != name {
                bail!(
                    "config file defines scenario `{}` but `{}` was requested",
                    cfg.id,
                    name
                );
            }
            cfg.validate()?;
            Ok(cfg)
        }
        None => Ok(builtin(name)?),
    }
}

fn configure_threads(threads: Option<usize>) -> anyhow::Result<()> {
    let Some(n) = threads else { return Ok(()) };
    #[cfg(feature = "parallel")]
    {
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the worker pool")?;
        }
        Ok(())
    }
    #[cfg(not(feature = "parallel"))]
    {
        if n > 1 {
            eprintln!("warning: built without the `parallel` feature; running sequentially");
        }
        Ok(())
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { scenario, config, out, seeds, threads } => {
            configure_threads(threads)?;
            let mut cfg = load_scenario(&scenario, &config)?;
            if let Some(s) = seeds {
                cfg.run.seeds = s;
                cfg.validate()?;
            }
            let (output, written) = run_scenario_to_dir(&cfg, &out, ExecMode::Parallel)?;
            println!(
                "{}: {} rows, config {}",
                cfg.id,
                output.results.rows.len(),
                &output.results.meta.config_hash[..12]
            );
            for note in &output.results.meta.notes {
                println!("  note: {note}");
            }
            for check in &output.checks {
                println!(
                    "  [{}] {}: measured {:.6} (expected [{:.6}, {:.6}])",
                    if check.pass { "pass" } else { "FAIL" },
                    check.name,
                    check.measured,
                    check.expected_low,
                    check.expected_high,
                );
            }
            for path in written {
                println!("  wrote {}", path.display());
            }
            Ok(())
        }
        Command::ListScenarios => {
            for id in builtin_ids() {
                let cfg = builtin(id)?;
                println!("{id:20} {}", cfg.description);
            }
            Ok(())
        }
        Command::Validate { config } => {
            let cfg = ScenarioConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            cfg.validate()?;
            println!("ok: scenario `{}` is valid", cfg.id);
            Ok(())
        }
    }
}
