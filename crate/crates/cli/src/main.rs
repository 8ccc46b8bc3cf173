use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use volterra_cli::commands::{self, Method, PartArg};
use volterra_cli::report::ReportDoc;
use volterra_cli::verify::{self, Expected, Level};
use volterra_cli::CliError;

/// Spectra, norms, numerical ranges and accretivity for powers of the
/// Volterra operator.
#[derive(Parser)]
#[command(name = "volterra", version)]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of Re Vⁿ or Im Vⁿ (singular values for V).
    Eigs {
        #[arg(long, value_enum)]
        part: PartArg,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, env = "VOLTERRA_M", default_value_t = 1000)]
        m: usize,
    },
    /// Hilbert–Schmidt norms and operator-norm bounds.
    Norms {
        #[arg(long)]
        n: u32,
        #[arg(long, env = "VOLTERRA_M", default_value_t = 1000)]
        m: usize,
    },
    /// Numerical ranges of Re Vⁿ and Im Vⁿ; for n = 1 the boundary of W(V).
    Nrange {
        #[arg(long)]
        n: u32,
        /// Samples of the boundary curve.
        #[arg(long, default_value_t = 2048, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        /// Write the boundary curve as CSV (n = 1 only).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "VOLTERRA_M", default_value_t = 1000)]
        m: usize,
    },
    /// Accretivity of aV + bV².
    Accretive {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, env = "VOLTERRA_M", default_value_t = 1000)]
        m: usize,
    },
    /// Run the reproduction suite.
    Verify {
        #[arg(long, value_enum, default_value = "fast")]
        level: Level,
        /// Fail on known-false bounds too.
        #[arg(long)]
        strict: bool,
    },
}

fn run(cli: &Cli) -> Result<(ReportDoc, ExitCode), CliError> {
    match &cli.command {
        Command::Eigs { part, n, method, count, m } => {
            Ok((commands::eigs(*part, *n, *method, *count, *m)?, ExitCode::SUCCESS))
        }
        Command::Norms { n, m } => Ok((commands::norms(*n, *m)?, ExitCode::SUCCESS)),
        Command::Nrange { n, points, out, m } => {
            Ok((commands::nrange(*n, *points as usize, *m, out.as_deref())?, ExitCode::SUCCESS))
        }
        Command::Accretive { a, b, m } => Ok((commands::accretive(*a, *b, *m)?, ExitCode::SUCCESS)),
        Command::Verify { level, strict } => {
            let doc = verify::run(*level, &Expected::default())?;
            let ok = if *strict { doc.status } else { doc.only_known_failures() };
            Ok((doc, if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, code)) => {
            let text = if cli.json {
                doc.to_json() + "\n"
            } else if cli.csv {
                doc.to_csv()
            } else {
                doc.to_table()
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
