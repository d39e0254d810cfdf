use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qcurrent::report::{
    describe_ope, emit_report, exit_code, run_check, run_suite, ConfigError, Format, Suite, SuiteConfig,
};

#[derive(Parser)]
#[command(name = "qcurrent", version, about = "Verify deformed current superalgebras and their realizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Series order for contractions without a closed form.
    #[arg(long, default_value_t = qcurrent::vertex::ORDER_LIMIT)]
    order: usize,
    /// Sample count for every check (each check has its own default).
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance for every numeric check (each check has its own default).
    #[arg(long)]
    tol: Option<f64>,
    /// Initial ln Γ recurrence depth for continuum ratios.
    #[arg(long = "shifts", default_value_t = qcurrent::continuum::DEFAULT_SHIFTS)]
    shifts: usize,
    /// Report runtime_ms as 0 so that reports are byte-reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite, a comma-separated list, or `all`.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the contraction and exchange ratio of two currents.
    Ope {
        #[arg(long)]
        rep: String,
        /// Two current names separated by a comma, e.g. `X+,X-`.
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
    /// Run a single check by id; `check-id list` prints every id.
    CheckId {
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn parse_suites(s: &str) -> Result<Vec<Suite>, ConfigError> {
    match s {
        "all" => Ok(Suite::ALL.to_vec()),
        "" | "none" => Ok(Vec::new()),
        list => list.split(',').map(|x| x.trim().parse()).collect(),
    }
}

fn config(suites: Vec<Suite>, run: &RunArgs) -> SuiteConfig {
    SuiteConfig {
        suites,
        order: run.order,
        samples: run.samples,
        tol: run.tol,
        shifts: run.shifts,
        seed: run.seed,
        timing: !run.no_timing,
    }
}

fn write_report(doc: &str, path: Option<&PathBuf>) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, doc).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{doc}");
            Ok(())
        }
    }
}

fn summary(results: &[qcurrent::report::CheckResult]) {
    for r in results.iter().filter(|r| r.status == qcurrent::report::Status::Fail) {
        eprintln!("FAIL {}: {}", r.id, r.reason.as_deref().unwrap_or(&r.max_error.to_string()));
    }
    let failed = results.iter().filter(|r| r.status == qcurrent::report::Status::Fail).count();
    eprintln!("{} checks, {failed} failed", results.len());
}

fn run(cli: Cli) -> Result<i32, (i32, String)> {
    let config_error = |e: ConfigError| (2, e.to_string());
    match cli.command {
        Command::Verify { suite, run } => {
            let format: Format = run.format.parse().map_err(config_error)?;
            let cfg = config(parse_suites(&suite).map_err(config_error)?, &run);
            let results = run_suite(&cfg).map_err(config_error)?;
            write_report(&emit_report(&results, &cfg, format), run.report.as_ref()).map_err(|e| (2, e))?;
            summary(&results);
            Ok(exit_code(&results))
        }
        Command::CheckId { id, run } => {
            if id == "list" {
                for id in qcurrent::report::check_ids() {
                    println!("{id}");
                }
                return Ok(0);
            }
            let format: Format = run.format.parse().map_err(config_error)?;
            let suite = Suite::of_id(&id).ok_or_else(|| config_error(ConfigError::UnknownCheck(id.clone())))?;
            let cfg = config(vec![suite], &run);
            let result = run_check(&id, &cfg).map_err(config_error)?;
            let results = [result];
            write_report(&emit_report(&results, &cfg, format), run.report.as_ref()).map_err(|e| (2, e))?;
            summary(&results);
            Ok(exit_code(&results))
        }
        Command::Ope { rep, pair, order } => {
            let Some((x, y)) = pair.split_once(',') else {
                return Err((2, format!("--pair expects two currents separated by a comma, got `{pair}`")));
            };
            let text = describe_ope(&rep, x.trim(), y.trim(), order).map_err(|e| (2, e.to_string()))?;
            print!("{text}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
