//! `spinobs` — angular-speed observer simulations on SO(3) and SO(2).
//!
//! Exit codes: 0 success, 1 failed property check, 2 usage/validation error,
//! 3 numerical blow-up.

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinobs_core::checks;
use spinobs_core::harness::{
    self, metrics::format_text_summary, preset, HarnessError, Scenario,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "spinobs",
    version,
    about = "Simulate manifold-free angular-speed observers and reproduce their benchmark experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ScenarioSource {
    /// Name of a built-in scenario (see `--help` of the subcommand).
    #[arg(long)]
    preset: Option<String>,
    /// Path to a JSON scenario document.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SummaryFormat {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    Linalg,
    Lyapunov,
    Projection,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario, write its trajectory CSV, and print a metrics summary.
    Run {
        #[command(flatten)]
        source: ScenarioSource,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Summary format on stdout.
        #[arg(long, value_enum, default_value_t = SummaryFormat::Text)]
        summary: SummaryFormat,
    },
    /// Run a scenario once per value of a swept parameter and write a metrics table.
    Sweep {
        #[command(flatten)]
        source: ScenarioSource,
        /// Parameter path, e.g. `gains.gamma` or `gains.k_scale_j0`.
        #[arg(long)]
        param: String,
        /// Comma-separated list of values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Output CSV path for the metrics table.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run randomized property suites and report per-property pass/fail.
    Check {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 12345)]
        seed: u64,
    },
}

fn load_scenario(source: &ScenarioSource) -> Result<Scenario, HarnessError> {
    match (&source.preset, &source.config) {
        (Some(name), None) => preset(name),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            Scenario::from_json_str(&text)
        }
        // clap's argument group enforces exactly one.
        _ => unreachable!("argument group guarantees one source"),
    }
}

fn exit_code_for(err: &HarnessError) -> u8 {
    match err {
        HarnessError::Integrate(_) => 3,
        _ => 2,
    }
}

fn cmd_run(source: &ScenarioSource, out: &PathBuf, summary: SummaryFormat) -> Result<(), (u8, String)> {
    let scenario = load_scenario(source).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let (trajectory, metrics) =
        harness::run(&scenario).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    harness::write_csv_file(&trajectory, out).map_err(|e| (2u8, format!("io error: {e}")))?;
    match summary {
        SummaryFormat::Text => println!("{}", format_text_summary(&metrics)),
        SummaryFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&metrics).expect("metrics serialize")
        ),
    }
    Ok(())
}

fn cmd_sweep(
    source: &ScenarioSource,
    param: &str,
    values: &[f64],
    out: &PathBuf,
) -> Result<(), (u8, String)> {
    if values.is_empty() {
        return Err((2, "sweep requires at least one value".to_string()));
    }
    let scenario = load_scenario(source).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    let rows = harness::sweep(&scenario, param, values)
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    harness::write_sweep_csv_file(param, &rows, out)
        .map_err(|e| (2u8, format!("io error: {e}")))?;
    for row in &rows {
        let ct = match row.metrics.convergence_time {
            Some(t) => format!("{t:.6}"),
            None => "NotConverged".to_string(),
        };
        println!(
            "{param} = {:>12.6}: convergence_time = {ct}, steady_state_rms = {:.6e}",
            row.value, row.metrics.steady_state_rms
        );
    }
    Ok(())
}

fn cmd_check(suite: Suite, seed: u64) -> Result<(), (u8, String)> {
    let reports = match suite {
        Suite::Linalg => checks::linalg_suite(seed),
        Suite::Lyapunov => checks::lyapunov_suite(seed),
        Suite::Projection => checks::projection_suite(seed),
        Suite::All => checks::all_suites(seed),
    };
    let mut failures = 0usize;
    for report in &reports {
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", report.name, report.detail);
        if !report.passed {
            failures += 1;
        }
    }
    if failures > 0 {
        Err((1, format!("{failures} of {} properties failed", reports.len())))
    } else {
        println!("all {} properties passed", reports.len());
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { source, out, summary } => cmd_run(source, out, *summary),
        Command::Sweep { source, param, values, out } => cmd_sweep(source, param, values, out),
        Command::Check { suite, seed } => cmd_check(*suite, *seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
