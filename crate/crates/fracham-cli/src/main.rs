//! Command-line front end for the fracham solver.
//!
//! Exit codes: 0 on success (including --help/--version), 1 on
//! configuration or usage errors, 2 on numerical failure. Failures
//! print a single-line diagnostic on stderr.

mod commands;
mod config;
mod csvout;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{cmd_alpha_table, cmd_hsweep, cmd_list, cmd_solve, CliError};
use config::{Overrides, RunConfig};

#[derive(Parser)]
#[command(
    name = "fracham",
    version,
    about = "Homotopy-analysis series solver for time-fractional PDEs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration; tabulate series value, reference, error
    Solve(RunArgs),
    /// Sweep the convergence-control parameter, one column per value
    Hsweep(HsweepArgs),
    /// Tabulate the reference solution across fractional orders
    AlphaTable(AlphaTableArgs),
    /// List the built-in problems
    List(ListArgs),
}

/// Flags shared by every solver-backed subcommand. Unset flags leave
/// the config-file or default value in force.
#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file, applied before flag overrides
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Problem name: diffusion, gasdyn, or kdv
    #[arg(long)]
    problem: Option<String>,

    /// Fractional order of the time derivative, in (0, 1)
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// Time warp psi: identity or log
    #[arg(long)]
    psi: Option<String>,

    /// Lower terminal (initial time)
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,

    /// Convergence-control parameter (nonzero)
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<f64>,

    /// Number of deformation terms beyond the initial one
    #[arg(long)]
    m_terms: Option<usize>,

    /// Left edge of the spatial grid
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,

    /// Right edge of the spatial grid
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,

    /// Number of grid nodes
    #[arg(long)]
    n_points: Option<usize>,

    /// Spatial point the output columns are evaluated at
    #[arg(long, allow_hyphen_values = true)]
    probe_x: Option<f64>,

    /// First output time
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,

    /// Last output time
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,

    /// Number of output times
    #[arg(long)]
    t_samples: Option<usize>,

    /// Output CSV path, or - for stdout
    #[arg(long)]
    output: Option<String>,

    /// Print the resolved configuration as key=value lines and exit
    #[arg(long)]
    dump_config: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            problem: self.problem.clone(),
            alpha: self.alpha,
            psi: self.psi.clone(),
            a: self.a,
            hbar: self.hbar,
            m_terms: self.m_terms,
            x_min: self.x_min,
            x_max: self.x_max,
            n_points: self.n_points,
            probe_x: self.probe_x,
            t_min: self.t_min,
            t_max: self.t_max,
            t_samples: self.t_samples,
            output: self.output.clone(),
        }
    }
}

#[derive(Args)]
struct HsweepArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Comma-separated hbar values, one solver run and column each
    #[arg(
        long,
        value_name = "H1,H2,...",
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    hbar_list: Vec<f64>,
}

#[derive(Args)]
struct AlphaTableArgs {
    #[command(flatten)]
    run: RunArgs,

    /// Comma-separated fractional orders; empty gives a header-only table
    #[arg(
        long,
        value_name = "A1,A2,...",
        value_delimiter = ',',
        allow_hyphen_values = true,
        num_args = 0..
    )]
    alpha_list: Vec<f64>,
}

#[derive(Args)]
struct ListArgs {
    /// One machine-readable record per line
    #[arg(long)]
    machine: bool,
}

/// Resolve the configuration for `args`, then run `body` and write its
/// CSV (or dump the configuration when asked).
fn execute(
    args: &RunArgs,
    body: impl FnOnce(&RunConfig) -> Result<String, CliError>,
) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(args.config.as_deref(), &args.overrides())?;
    if args.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    let csv = body(&cfg)?;
    csvout::write_output(&cfg.output, &csv)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", cfg.output)))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => execute(&args, cmd_solve),
        Command::Hsweep(args) => execute(&args.run, |cfg| cmd_hsweep(cfg, &args.hbar_list)),
        Command::AlphaTable(args) => {
            execute(&args.run, |cfg| cmd_alpha_table(cfg, &args.alpha_list))
        }
        Command::List(args) => {
            print!("{}", cmd_list(args.machine));
            Ok(())
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            // Usage errors are configuration errors: one line, exit 1.
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid command line");
            eprintln!("{line}");
            std::process::exit(1);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
