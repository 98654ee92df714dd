//! Batch front end for the simulator: validate a config, list what is
//! registered, or run every scenario in a config to CSV (and, on
//! request, gnuplot scripts).
//!
//! Exit codes: 0 on success, 2 when the config fails validation, 1 on
//! any hard error (I/O, engine faults). Diagnostics go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use fas_sim::{
    load_config, plot_script, run_scenarios, scheme_names, strategy_specs, PlotKind, Scenario,
    SimError,
};

#[derive(Parser)]
#[command(
    name = "fas-sim",
    version,
    about = "Monte-Carlo link simulator for fluid-antenna multi-user downlinks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario in the config and write one CSV per config.
    Run {
        /// Scenario config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Worker threads; 0 means one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Override every scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for outputs (created if missing).
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Also write gnuplot scripts next to the CSV.
        #[arg(long)]
        emit_plots: bool,
    },
    /// Parse a config and report every diagnostic without running it.
    Validate {
        /// Scenario config (TOML).
        #[arg(long)]
        config: PathBuf,
    },
    /// List the registered access schemes and port strategies.
    ListSchemes,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            report(&err);
            match err.downcast_ref::<SimError>() {
                Some(SimError::Config(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Print a config error as one diagnostic per line; anything else as a
/// single error line with its cause chain.
fn report(err: &anyhow::Error) {
    if let Some(SimError::Config(diagnostics)) = err.downcast_ref::<SimError>() {
        eprintln!("error: invalid config ({} problem(s))", diagnostics.len());
        for d in diagnostics {
            eprintln!("  {d}");
        }
        return;
    }
    eprintln!("error: {err:#}");
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { config, workers, seed, out_dir, emit_plots } => {
            run(&config, workers, seed, &out_dir, emit_plots)
        }
        Command::Validate { config } => validate(&config),
        Command::ListSchemes => {
            println!("schemes: {}", scheme_names().join(", "));
            println!("port strategies: {}", strategy_specs().join(", "));
            Ok(())
        }
    }
}

fn load(config: &Path) -> anyhow::Result<Vec<Scenario>> {
    load_config(config).with_context(|| format!("loading {}", config.display()))
}

fn validate(config: &Path) -> anyhow::Result<()> {
    let scenarios = load(config)?;
    println!("ok: {} scenario(s)", scenarios.len());
    for s in &scenarios {
        println!(
            "  {}: {} users, {} tx antenna(s), {} port(s), {} trials x {} SNR points",
            s.label,
            s.users,
            s.tx_antennas,
            s.num_ports,
            s.trials,
            s.snr_grid.num_points
        );
    }
    Ok(())
}

fn run(
    config: &Path,
    workers: usize,
    seed: Option<u64>,
    out_dir: &Path,
    emit_plots: bool,
) -> anyhow::Result<()> {
    let mut scenarios = load(config)?;
    if let Some(seed) = seed {
        for s in &mut scenarios {
            s.seed = seed;
        }
    }

    let table = run_scenarios(&scenarios, workers)?;

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let stem = config
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| anyhow::anyhow!("config path has no usable file stem"))?;

    let csv_path = out_dir.join(format!("{stem}.csv"));
    table.emit_csv(&csv_path).with_context(|| format!("writing {}", csv_path.display()))?;
    println!("wrote {} ({} rows)", csv_path.display(), table.rows.len());

    let resampled: u64 = scenarios
        .iter()
        .filter_map(|s| {
            table.rows.iter().find(|r| r.scheme_label == s.label).map(|r| r.resampled_trials)
        })
        .sum();
    if resampled > 0 {
        println!("note: {resampled} singular trial(s) were resampled");
    }

    if emit_plots {
        for (kind, suffix) in [(PlotKind::Outage, "op"), (PlotKind::SumRate, "rate")] {
            let plot_stem = format!("{stem}-{suffix}");
            let script = plot_script(&table, kind, &plot_stem)?;
            let path = out_dir.join(format!("{plot_stem}.gp"));
            std::fs::write(&path, script)
                .with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
