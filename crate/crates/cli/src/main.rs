use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sobolev_cli::commands::{self, Report};
use sobolev_cli::config::RunConfig;
use sobolev_cli::{CliError, EXIT_INVARIANT};

#[derive(Parser)]
#[command(name = "sobolev", version, about = "Jacobi-Sobolev orthogonal polynomials: zeros, ODE and electrostatics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of S_0 .. S_n.
    Polys(Args),
    /// Zeros of S_n.
    Zeros(Args),
    /// Coefficients of the second-order ODE satisfied by S_n.
    Ode(Args),
    /// Field decomposition, energy derivatives and classification at the zeros of S_n.
    Electro(Args),
    /// Runs every invariant check up to degree n.
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    /// JSON product definition.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Degree; overrides `n` in the config.
    #[arg(long)]
    n: Option<usize>,
    /// Mantissa bits; overrides `precision_bits` in the config.
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

type CommandFn = fn(&RunConfig, usize) -> Result<Report, CliError>;

fn run(command: Command) -> Result<bool, CliError> {
    let (args, f): (Args, CommandFn) = match command {
        Command::Polys(a) => (a, commands::polys),
        Command::Zeros(a) => (a, commands::zeros),
        Command::Ode(a) => (a, commands::ode),
        Command::Electro(a) => (a, commands::electro),
        Command::Verify(a) => (a, commands::verify),
    };
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text, args.precision)?;
    let n = args.n.or(cfg.n).ok_or_else(|| CliError::Config {
        line: None,
        field: "n".into(),
        message: "degree missing: set `n` in the config or pass --n".into(),
    })?;
    let report = f(&cfg, n)?;
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
        Format::Csv => report.csv,
    };
    match &args.out {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => print!("{body}"),
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_INVARIANT as u8)
        }
        Err(e) => {
            eprintln!("sobolev: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
