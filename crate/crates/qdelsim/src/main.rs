//! `qdelsim` CLI: verify deletion correction, tabulate rates, or run a
//! single simulated trial, all driven by a JSON config file.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdelsim::config::{load_config, RunConfig, SimulateConfig, VerifyConfig};
use qdelsim::error::PipelineError;
use qdelsim::pipeline::{self, run_trial};
use qdelsim::rate::rate_table;
use qdelsim::report::{write_rates_csv, write_simulate_report, write_verify_report};

const EXIT_VERIFICATION_FAILED: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "qdelsim", version, about = "Simulator for quantum multi-deletion codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Master seed; overrides the config's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path; overrides the config's `out` (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to QDELSIM_JOBS, then all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep deletion patterns and verify exact recovery.
    Verify { config: PathBuf },
    /// Emit the rate-convergence table as CSV.
    Rates { config: PathBuf },
    /// Run a single encode-delete-decode trial.
    Simulate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    let jobs = cli.jobs.or_else(|| {
        std::env::var("QDELSIM_JOBS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err(PipelineError::Config("--jobs must be at least 1".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| PipelineError::Config(format!("thread pool: {e}")))?;
    }

    let (expected, path) = match &cli.command {
        Command::Verify { config } => ("verify", config),
        Command::Rates { config } => ("rates", config),
        Command::Simulate { config } => ("simulate", config),
    };
    let config = load_config(path)?;
    if config.command_name() != expected {
        return Err(PipelineError::Config(format!(
            "config file is for \"{}\" but the \"{expected}\" subcommand was invoked",
            config.command_name()
        )));
    }

    let out_path = cli.out.clone().or_else(|| config.out().map(PathBuf::from));
    let mut out: Box<dyn Write> = match &out_path {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| {
            PipelineError::Config(format!("cannot create {}: {e}", p.display()))
        })?),
        None => Box::new(std::io::stdout().lock()),
    };

    match config {
        RunConfig::Verify(v) => cmd_verify(&v, cli.seed, &mut out),
        RunConfig::Rates(r) => {
            let rows = rate_table(&r.query()?)?;
            write_rates_csv(&mut out, &rows)
                .map_err(|e| PipelineError::Config(format!("write failed: {e}")))?;
            Ok(ExitCode::SUCCESS)
        }
        RunConfig::Simulate(s) => cmd_simulate(&s, cli.seed, &mut out),
    }
}

fn cmd_verify(
    config: &VerifyConfig,
    seed_override: Option<u64>,
    out: &mut dyn Write,
) -> Result<ExitCode, PipelineError> {
    let seed = seed_override.unwrap_or(config.master_seed);
    let (reports, summary) = pipeline::verify_theorem1(&config.experiment(), seed)?;
    write_verify_report(out, &reports, &summary)
        .map_err(|e| PipelineError::Config(format!("write failed: {e}")))?;
    if summary.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "verification failed: {}/{} trials did not recover the logical state",
            summary.failures, summary.trials
        );
        Ok(ExitCode::from(EXIT_VERIFICATION_FAILED))
    }
}

fn cmd_simulate(
    config: &SimulateConfig,
    seed_override: Option<u64>,
    out: &mut dyn Write,
) -> Result<ExitCode, PipelineError> {
    let seed = seed_override.unwrap_or(config.master_seed);
    let (code, layout) = pipeline::build_code(&config.params)?;
    if config.pattern.len() > config.params.t {
        return Err(PipelineError::Config(format!(
            "pattern deletes {} positions but the code only corrects up to t = {}",
            config.pattern.len(),
            config.params.t
        )));
    }
    let sigma = pipeline::logical_mixture(&config.logical_state, code.logical_qubits())?;
    let report = run_trial(
        &code,
        &layout,
        &config.logical_state.label(),
        &sigma,
        &sigma.to_density(),
        &config.pattern,
        config.tolerance,
        false,
        seed,
    );
    let passed = report.passed;
    write_simulate_report(out, &report)
        .map_err(|e| PipelineError::Config(format!("write failed: {e}")))?;
    if passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("simulation did not recover the logical state");
        Ok(ExitCode::from(EXIT_VERIFICATION_FAILED))
    }
}
