use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use onq_cli::commands::{self, RunOptions};
use onq_cli::{scenarios, CliError, CliResult, CommandKind, Scenario, SweepSpec};

#[derive(Parser, Debug)]
#[command(name = "onq-sim", version, about = "Opto-nuclear quadrupolar coupling simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Bundled scenario name instead of a file.
    #[arg(long, global = true, conflicts_with = "config")]
    scenario: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sweep worker threads.
    #[arg(long, global = true, env = "ONQ_SIM_WORKERS")]
    workers: Option<usize>,
    /// Record every k-th integrator step.
    #[arg(long, global = true)]
    stride: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Nuclear spin level structure.
    Spin(CommonArgs),
    /// Response tensors from an EFG series and closed-form estimates.
    Tensors(CommonArgs),
    /// Swap-protocol run: trajectory CSV and summary JSON.
    Simulate(CommonArgs),
    /// Fidelity over a one-parameter sweep.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Dotted parameter path (overrides `[sweep]`).
        #[arg(long, requires = "values")]
        param: Option<String>,
        /// Comma-separated sweep values.
        #[arg(long, value_delimiter = ',', requires = "param")]
        values: Option<Vec<f64>>,
    },
    /// Heating, ionization, readout and linewidth budgets.
    Feasibility(CommonArgs),
    /// Run golden scenarios and check their expectations.
    Regress(CommonArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[command(flatten)]
    common: Common,
}

fn load(c: &Common) -> CliResult<Scenario> {
    match (&c.config, &c.scenario) {
        (Some(p), _) => Scenario::load(p),
        (None, Some(name)) => scenarios::load(name)
            .unwrap_or_else(|| Err(CliError::config(format!("no bundled scenario `{name}`")))),
        (None, None) => Err(CliError::config("--config <path> or --scenario <name> is required")),
    }
}

fn options(c: &Common) -> RunOptions {
    RunOptions { stride: c.stride, workers: c.workers }
}

/// Writes to stdout, ignoring a closed pipe (`onq-sim ... | head`).
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(report: &commands::Report, out: Option<&PathBuf>, default_dir: bool) -> CliResult<()> {
    match out {
        Some(dir) => report.write_files(dir)?,
        None if default_dir => report.write_files(&PathBuf::from("."))?,
        None => {}
    }
    say(&serde_json::to_string_pretty(&report.summary).unwrap_or_default());
    Ok(())
}

fn single(kind: CommandKind, args: &CommonArgs) -> CliResult<()> {
    let c = &args.common;
    let scn = load(c)?;
    let report = commands::run(kind, &scn, options(c))?;
    emit(&report, c.out.as_ref(), kind == CommandKind::Simulate)
}

fn execute(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spin(a) => single(CommandKind::Spin, &a),
        Command::Tensors(a) => single(CommandKind::Tensors, &a),
        Command::Simulate(a) => single(CommandKind::Simulate, &a),
        Command::Feasibility(a) => single(CommandKind::Feasibility, &a),
        Command::Sweep { common, param, values } => {
            let c = &common.common;
            let scn = load(c)?;
            let spec = match (param, values) {
                (Some(p), Some(v)) => Some(SweepSpec::from_values(p, v)),
                _ => None,
            };
            let report = commands::sweep(&scn, spec.as_ref(), options(c))?;
            emit(&report, c.out.as_ref(), true)
        }
        Command::Regress(a) => {
            let c = &a.common;
            let list = if c.config.is_some() || c.scenario.is_some() {
                vec![load(c)?]
            } else {
                scenarios::load_all()?
            };
            let outcome = commands::regress(&list, options(c))?;
            if let Some(dir) = &c.out {
                outcome.report.write_files(dir)?;
            }
            for row in &outcome.rows {
                say(&row.line());
            }
            match outcome.failures() {
                0 => Ok(()),
                n => Err(CliError::Regression(format!("{n} of {} checks outside their band", outcome.rows.len()))),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
