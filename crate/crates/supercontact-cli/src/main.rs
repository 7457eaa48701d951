//! Batch front end for the exact super-calculus engine: verification
//! runs, weight-grid dimension scans, bracket and operator tables.
//!
//! Exit codes: 0 when every case passed, 1 when at least one mathematical
//! check failed, 2 when the configuration or I/O was refused. Reports are
//! deterministic: two runs with the same flags emit identical bytes.

mod commands;
mod config;
mod render;

use std::io::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};

use config::{AlgebraOpt, CliError, CommonOpts, OpTypeOpt, RunConfig};

#[derive(Parser)]
#[command(
    name = "supercontact",
    version,
    about = "Exact cohomology verification, weight-grid scans, and operator tables \
             for the superline with two odd variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite; weight flags append per-cell dimension
    /// checks against the built-in dimension table
    Verify(CommonOpts),
    /// Report first-cohomology dimensions over a weight grid
    Scan(CommonOpts),
    /// Print the bracket table of the eight-generator algebra
    BracketTable(CommonOpts),
    /// Classify invariant bilinear operators on weighted densities
    InvariantOps(InvariantOpts),
    /// List the built-in cocycle and coboundary-generator families
    Catalog(CatalogOpts),
}

#[derive(Args)]
struct InvariantOpts {
    #[command(flatten)]
    common: CommonOpts,

    /// Acting algebra.
    #[arg(long, value_enum, default_value = "sl2")]
    algebra: AlgebraOpt,

    /// Weight-shift family: 11 = half step (even maps), 12 = integer step
    /// (odd maps). Default: 11 for one classification, both for a scan.
    #[arg(long = "type", value_enum)]
    op_type: Option<OpTypeOpt>,
}

#[derive(Args)]
struct CatalogOpts {
    #[command(flatten)]
    common: CommonOpts,

    /// What to do with the catalog.
    #[arg(default_value = "list", value_parser = ["list"])]
    action: String,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are configuration errors; help and version
            // requests are successes.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (cfg, outcome) = match cli.command {
        Command::Verify(opts) => {
            let cfg = RunConfig::from_opts(opts)?;
            let outcome = commands::run_verify(&cfg)?;
            (cfg, outcome)
        }
        Command::Scan(opts) => {
            let cfg = RunConfig::from_opts(opts)?;
            let outcome = commands::run_scan(&cfg)?;
            (cfg, outcome)
        }
        Command::BracketTable(opts) => {
            let cfg = RunConfig::from_opts(opts)?;
            let outcome = commands::run_bracket_table(&cfg)?;
            (cfg, outcome)
        }
        Command::InvariantOps(opts) => {
            let cfg = RunConfig::from_opts(opts.common)?;
            let outcome = commands::run_invariant_ops(&cfg, opts.algebra, opts.op_type)?;
            (cfg, outcome)
        }
        Command::Catalog(opts) => {
            let cfg = RunConfig::from_opts(opts.common)?;
            let outcome = commands::run_catalog(&cfg)?;
            (cfg, outcome)
        }
    };
    emit(&outcome.payload, cfg.out.as_deref())?;
    Ok(outcome.all_pass)
}

fn emit(payload: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(format!("cannot write to standard output: {e}")))
        }
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
    }
}
