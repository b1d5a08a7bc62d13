//! Command-line front end: instance generation, refutation, verification,
//! lower-bound oracles and the acceptance suites.

pub mod args;
pub mod commands;
pub mod experiments;
pub mod oracles;
pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;
use ipsforge_core::lowerbounds::Budget;
use serde_json::Value;

use args::{Cli, Command};
use experiments::ExperimentRegistry;
use oracles::OracleRegistry;
pub use output::{CliError, Outcome, RunConfig};

/// Oracles whose bounds only hold for generic coefficients default to a large base field.
const GENERIC_ORACLES: [&str; 4] = ["rank", "eval-dim", "roabp-width", "sparsity"];

fn config_for(cli: &Cli, subcommand: &str) -> RunConfig {
    let default_k = match subcommand.strip_prefix("oracle ") {
        Some(name) if GENERIC_ORACLES.contains(&name) => 12,
        _ => 1,
    };
    let defaults = Budget::default();
    RunConfig {
        subcommand: subcommand.to_string(),
        p: cli.p,
        k: cli.k.unwrap_or(default_k),
        n: cli.n,
        seed: cli.seed,
        format: cli.format,
        out: cli.out.clone(),
        budget: Budget {
            cube_vars: cli.budget_n.unwrap_or(defaults.cube_vars),
            symbolic_n: cli.symbolic_cap,
        },
        params: Default::default(),
    }
}

/// Runs one parsed command. `binary` is the executable used for the
/// process-level determinism check of the acceptance suite.
pub fn dispatch(cli: &Cli, binary: Option<PathBuf>) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Gen(a) => commands::cmd_gen(config_for(cli, "gen"), a),
        Command::Refute(a) => commands::cmd_refute(config_for(cli, "refute"), a),
        Command::Verify(a) => commands::cmd_verify(config_for(cli, "verify"), a),
        Command::Oracle(a) => {
            let registry = OracleRegistry::with_builtins();
            if a.name == "list" {
                return Ok(Outcome::ok(registry.listing()));
            }
            let mut config = config_for(cli, &format!("oracle {}", a.name));
            let mut report = registry.get(&a.name)?.run(&mut config, a)?;
            report["config"] = config.to_json();
            Ok(Outcome::ok(report))
        }
        Command::Experiment(a) => {
            let registry = ExperimentRegistry::with_builtins(binary);
            if a.suite == "list" {
                return Ok(Outcome::ok(registry.listing()));
            }
            let config = config_for(cli, &format!("experiment {}", a.suite));
            let mut outcome = registry.get(&a.suite)?.run(&config)?;
            outcome.report["config"] = config.to_json();
            Ok(outcome)
        }
    }
}

/// Parses `argv`, runs the command, writes the report and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let binary = std::env::current_exe().ok();
    let result = dispatch(&cli, binary).and_then(|outcome| {
        let rendered = output::render(&outcome.report, cli.format, cli.canonical);
        output::write_output(&rendered, cli.out.as_deref())?;
        Ok(outcome.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", Value::to_string(&e.to_json()));
            e.exit_code()
        }
    }
}
