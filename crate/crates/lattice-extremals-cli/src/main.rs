//! `lattice-extremals`: evaluation, reduction, scans, extremum search,
//! sign-suite verification and reproduction of reference constants.

mod args;
mod commands;
mod output;
mod reproduce;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_extremals::SeriesConfig;

/// Lattice theta and Epstein zeta functions over the modular fundamental domain.
#[derive(Parser, Debug)]
#[command(name = "lattice-extremals", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Relative series tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Term cap for every series.
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Grid size NxM for scan and verify.
    #[arg(long, global = true, value_parser = args::parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Output format (scan defaults to csv, everything else to json).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads [env: LATTICE_EXTREMALS_THREADS].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a single quantity.
    Eval(commands::EvalArgs),
    /// Reduce a point of the upper half-plane to the fundamental domain.
    Reduce(commands::ReduceArgs),
    /// Evaluate a functional on a rectangular grid.
    Scan(commands::ScanArgs),
    /// Multistart extremum search for a functional.
    Find(commands::FindArgs),
    /// Run a sign-verification suite (exit 3 if it fails).
    Verify(commands::VerifyArgs),
    /// Reproduce reference constants (exit 3 if any check fails).
    Reproduce(reproduce::ReproduceArgs),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<lattice_extremals::Error> for CliError {
    fn from(e: lattice_extremals::Error) -> Self {
        use lattice_extremals::Error as E;
        match e {
            E::Domain(_) | E::UnknownSuite => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

/// Command outcome: whether every check passed (always true for verbs
/// without checks).
pub type Outcome = Result<bool, CliError>;

impl Global {
    pub fn config(&self) -> Result<SeriesConfig, CliError> {
        let d = SeriesConfig::default();
        SeriesConfig::new(self.tol.unwrap_or(d.rel_tol), self.max_terms.unwrap_or(d.max_terms))
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn grid_or(&self, default: (usize, usize)) -> (usize, usize) {
        self.grid.unwrap_or(default)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn threads(&self) -> Result<Option<usize>, CliError> {
        if let Some(n) = self.threads {
            return Ok(Some(n));
        }
        match std::env::var("LATTICE_EXTREMALS_THREADS") {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("LATTICE_EXTREMALS_THREADS: invalid thread count '{v}'"))),
            _ => Ok(None),
        }
    }
}

const USAGE: &str = "Usage: lattice-extremals <COMMAND> [OPTIONS]\nRun 'lattice-extremals --help' for details.";

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    if let Some(n) = cli.global.threads()? {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Compute(e.to_string()))?;
    }
    let g = &cli.global;
    match &cli.command {
        Command::Eval(a) => commands::eval(a, g, out),
        Command::Reduce(a) => commands::reduce(a, g, out),
        Command::Scan(a) => commands::scan(a, g, out),
        Command::Find(a) => commands::find(a, g, out),
        Command::Verify(a) => commands::verify(a, g, out),
        Command::Reproduce(a) => reproduce::reproduce(a, g, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = e.print();
            } else {
                let text = e.render().to_string();
                eprint!("{text}");
                if !text.contains("Usage:") {
                    eprintln!("\n{USAGE}");
                }
            }
            return ExitCode::from(code as u8);
        }
    };
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(3),
        (Err(CliError::Usage(msg)), _) => {
            eprintln!("error: {msg}\n\n{USAGE}");
            ExitCode::from(2)
        }
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: output error: {e}");
            ExitCode::from(1)
        }
    }
}
