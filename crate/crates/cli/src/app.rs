//! Subcommand dispatch and exit-code policy.
//!
//! Exit codes: 0 on success, 1 on configuration errors (unreadable or
//! invalid config, bad sweep values), 2 on output I/O errors and CLI
//! usage errors.

use crate::config::parse_config;
use crate::output::{metrics_to_json, records_from_csv, records_to_csv, sweep_to_csv};
use cbf_pursuit::{alpha_sweep, latency_sweep, run_scenario, summarize, Metrics, ScenarioConfig, SimLog};
use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Parser)]
#[command(name = "cbf-pursuit", about = "Safety-filtered pursuit scenarios and sweeps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario; writes <out>/log.csv and <out>/metrics.json.
    Run {
        /// Scenario config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the scenario once per alpha; writes <out>/sweep_alpha.csv.
    SweepAlpha {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated alpha values, e.g. 0.5,0.8,1,1.3,1.5,1.8,2.
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the scenario once per sensing latency; writes
    /// <out>/sweep_latency.csv.
    SweepLatency {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated latencies in seconds, e.g. 0,0.005,0.015,0.1.
        #[arg(long)]
        latencies: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum CmdError {
    Config(String),
    Io(String),
}

impl CmdError {
    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Config(_) => EXIT_CONFIG,
            CmdError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Config(m) | CmdError::Io(m) => m,
        }
    }
}

fn load_config(path: &Path) -> Result<ScenarioConfig, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
        .map_err(|e| CmdError::Config(format!("config {}: {e}", path.display())))
}

fn parse_values(flag: &str, list: &str) -> Result<Vec<f64>, CmdError> {
    let mut out = Vec::new();
    for part in list.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse::<f64>()
                .map_err(|_| CmdError::Config(format!("{flag}: bad value '{part}'")))?,
        );
    }
    if out.is_empty() {
        return Err(CmdError::Config(format!("{flag}: no values given")));
    }
    Ok(out)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CmdError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CmdError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Metrics of the log as serialized: parse the rounded CSV back and
/// summarize that, so metrics.json always agrees with log.csv.
fn metrics_of_emitted(csv: &str, cfg: &ScenarioConfig) -> Result<Metrics, CmdError> {
    let records = records_from_csv(csv)
        .map_err(|e| CmdError::Io(format!("re-reading emitted log: {e}")))?;
    summarize(&SimLog { records, config: cfg.clone() })
        .map_err(|e| CmdError::Config(e.to_string()))
}

fn cmd_run(config_path: &Path, out_dir: &Path) -> Result<(), CmdError> {
    let cfg = load_config(config_path)?;
    let log = run_scenario(&cfg).map_err(|e| CmdError::Config(e.to_string()))?;
    let csv = records_to_csv(&log.records);
    let metrics = metrics_of_emitted(&csv, &cfg)?;
    let log_path = write_file(out_dir, "log.csv", &csv)?;
    let metrics_path = write_file(out_dir, "metrics.json", &metrics_to_json(&metrics, &cfg))?;
    println!("wrote {} ({} rows)", log_path.display(), log.records.len());
    println!("wrote {}", metrics_path.display());
    println!(
        "lambda_mean = {:.3} m, lambda_min = {:.3} m, steady_state = {:.3} m, collision = {}",
        metrics.lambda_mean, metrics.lambda_min, metrics.steady_state_lambda, metrics.collision
    );
    Ok(())
}

fn cmd_sweep_alpha(config_path: &Path, alphas: &str, out_dir: &Path) -> Result<(), CmdError> {
    let cfg = load_config(config_path)?;
    let alphas = parse_values("--alphas", alphas)?;
    let rows = alpha_sweep(&cfg, &alphas).map_err(|e| CmdError::Config(e.to_string()))?;
    let path = write_file(out_dir, "sweep_alpha.csv", &sweep_to_csv("alpha", &rows))?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

fn cmd_sweep_latency(config_path: &Path, latencies: &str, out_dir: &Path) -> Result<(), CmdError> {
    let cfg = load_config(config_path)?;
    let latencies = parse_values("--latencies", latencies)?;
    let rows = latency_sweep(&cfg, &latencies).map_err(|e| CmdError::Config(e.to_string()))?;
    let path = write_file(out_dir, "sweep_latency.csv", &sweep_to_csv("latency_s", &rows))?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

/// Parse arguments and execute; returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Also covers --help/--version, which exit successfully.
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run { config, out } => cmd_run(config, out),
        Command::SweepAlpha { config, alphas, out } => cmd_sweep_alpha(config, alphas, out),
        Command::SweepLatency { config, latencies, out } => {
            cmd_sweep_latency(config, latencies, out)
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
