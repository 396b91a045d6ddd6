//! `qflux` — evaluate, sweep, fuzz, and saturation-search uncertainty bounds
//! between observables and their time derivatives.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use qflux_harness::config::{Mode, OutputFormat, StateSpec};
use qflux_harness::emit;
use qflux_harness::error::HarnessError;
use qflux_harness::sweep::TraceRow;
use qflux_harness::{find_min_slack, load_config, run_check, run_fuzz, run_sweep, RunConfig};

#[derive(Parser)]
#[command(name = "qflux", version, about = "Uncertainty bounds for observables and their time derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the configured scenario once and verify the inequality chain.
    Check {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's seed (fuzz, saturate, and haar_random state).
        #[arg(long)]
        seed: Option<u64>,
        /// Override constants.hbar.
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Evaluate the relation on a time grid and emit a trace.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Override the output path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Run a randomized campaign; exit 1 if any violation is found.
    Fuzz {
        #[arg(long)]
        config: PathBuf,
        /// Size of the worker pool (never affects output content).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Search for a state minimizing the slack; exit 1 if the target is unmet.
    Saturate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        hbar: Option<f64>,
    },
}

fn apply_overrides(config: &mut RunConfig, seed: Option<u64>, hbar: Option<f64>) -> Result<(), HarnessError> {
    if let Some(seed) = seed {
        if let Some(fuzz) = config.fuzz.as_mut() {
            fuzz.seed = seed;
        }
        if let Some(saturate) = config.saturate.as_mut() {
            saturate.seed = seed;
        }
        if let Some(StateSpec::HaarRandom { seed: state_seed }) = config.state.as_mut() {
            *state_seed = seed;
        }
    }
    if let Some(hbar) = hbar {
        config.constants.hbar = hbar;
        config.constants.validate()?;
    }
    Ok(())
}

fn run_check_command(config: &RunConfig) -> Result<i32, HarnessError> {
    let outcome = run_check(config)?;
    let output = config.output();
    let payload = match output.format {
        OutputFormat::Json => emit::to_pretty_json(&outcome)?,
        OutputFormat::Csv => {
            let row = TraceRow::from_report(&outcome.report, outcome.exp_sz);
            emit::trace_to_csv(&qflux_harness::TimeTrace { rows: vec![row] })
        }
    };
    emit::write_payload(&output, &payload)?;
    Ok(if outcome.passed() { 0 } else { 1 })
}

fn run_sweep_command(config: &RunConfig, out: Option<PathBuf>) -> Result<i32, HarnessError> {
    let trace = run_sweep(config)?;
    let mut output = config.output();
    if out.is_some() {
        output.path = out;
    }
    let payload = emit::render_trace(&trace, output.format)?;
    emit::write_payload(&output, &payload)?;
    Ok(0)
}

fn run_fuzz_command(config: &RunConfig, workers: Option<usize>) -> Result<i32, HarnessError> {
    let report = with_workers(workers, || run_fuzz(config))?;
    let output = config.output();
    if output.format == OutputFormat::Csv {
        return Err(HarnessError::Config(
            "output.format: fuzz reports support json only".into(),
        ));
    }
    let payload = emit::to_pretty_json(&report)?;
    emit::write_payload(&output, &payload)?;
    Ok(if report.violations.is_empty() { 0 } else { 1 })
}

fn run_saturate_command(config: &RunConfig) -> Result<i32, HarnessError> {
    let spec = config
        .saturate
        .ok_or_else(|| HarnessError::Config("saturate: required for saturate mode".into()))?;
    let (state, report) = find_min_slack(config)?;
    let achieved = report.slack <= spec.target_slack;

    #[derive(serde::Serialize)]
    struct SearchResult {
        state: Vec<[f64; 2]>,
        report: qflux_core::UncertaintyReport,
        target_slack: f64,
        achieved: bool,
    }
    let payload = emit::to_pretty_json(&SearchResult {
        state: state.to_vec().into_iter().map(|z| [z.re, z.im]).collect(),
        report,
        target_slack: spec.target_slack,
        achieved,
    })?;
    let output = config.output();
    if output.format == OutputFormat::Csv {
        return Err(HarnessError::Config(
            "output.format: saturation results support json only".into(),
        ));
    }
    emit::write_payload(&output, &payload)?;
    Ok(if achieved { 0 } else { 1 })
}

#[cfg(feature = "parallel")]
fn with_workers<T>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match workers {
        Some(n) if n >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    f()
}

fn dispatch(cli: Cli) -> Result<i32, HarnessError> {
    let (path, mode, seed, hbar) = match &cli.command {
        Command::Check { config, seed, hbar } => (config, Mode::Check, *seed, *hbar),
        Command::Sweep { config, seed, hbar, .. } => (config, Mode::Sweep, *seed, *hbar),
        Command::Fuzz { config, seed, hbar, .. } => (config, Mode::Fuzz, *seed, *hbar),
        Command::Saturate { config, seed, hbar } => (config, Mode::Saturate, *seed, *hbar),
    };
    let mut config = load_config(path)?;
    config.expect_mode(mode)?;
    apply_overrides(&mut config, seed, hbar)?;
    config.validate()?;

    match cli.command {
        Command::Check { .. } => run_check_command(&config),
        Command::Sweep { out, .. } => run_sweep_command(&config, out),
        Command::Fuzz { workers, .. } => run_fuzz_command(&config, workers),
        Command::Saturate { .. } => run_saturate_command(&config),
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}
