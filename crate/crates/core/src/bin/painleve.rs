use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use painleve::cli::corpus::{default_threads, run_corpus};
use painleve::cli::{parse_rational, run_analyze, AnalyzeOptions, CliError, Format, Outcome, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "painleve", version, about = "Decide the Painlevé property for first-order algebraic ODEs F(z, y, y') = 0")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Initial number of terms in place expansions.
    #[arg(long, value_name = "N")]
    truncation: Option<usize>,
    /// Residual target for witnesses, in powers of z - z1.
    #[arg(long, value_name = "N")]
    witness_order: Option<u32>,
    /// Skip the branched-solution witness.
    #[arg(long)]
    no_witness: bool,
    /// Treat heuristic irreducibility as unsupported.
    #[arg(long)]
    strict: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a single equation, e.g. "(y')^2 = y - z^2".
    Analyze {
        equation: String,
        /// Rational base point for the witness, e.g. 1, -1/2 or 0.25.
        #[arg(long, value_name = "Z1", allow_hyphen_values = true)]
        witness_at: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a corpus file of equations with optional expectations.
    Corpus {
        path: PathBuf,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn options(c: &Common) -> AnalyzeOptions {
    AnalyzeOptions {
        truncation: c.truncation,
        witness_at: None,
        witness_order: c.witness_order,
        no_witness: c.no_witness,
        strict: c.strict,
        timing: c.timing,
    }
}

fn format(c: &Common) -> Format {
    match c.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    }
}

fn emit(o: Outcome) -> ExitCode {
    if !o.stdout.is_empty() {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{}", o.stdout);
    }
    if !o.stderr.is_empty() {
        eprintln!("{}", o.stderr);
    }
    ExitCode::from(o.exit as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
    match cli.command {
        Command::Analyze { equation, witness_at, common } => {
            let mut opts = options(&common);
            let fmt = format(&common);
            if let Some(z) = witness_at {
                match parse_rational(&z) {
                    Some(q) => opts.witness_at = Some(q),
                    None => {
                        let e = CliError {
                            code: "bad-argument".into(),
                            message: format!("--witness-at expects a rational number, got `{}`", z),
                            exit: EXIT_INPUT,
                        };
                        let stderr = match fmt {
                            Format::Text => e.render_text(),
                            Format::Json => e.render_json(),
                        };
                        return emit(Outcome { exit: e.exit, stdout: String::new(), stderr });
                    }
                }
            }
            emit(run_analyze(&equation, &opts, fmt, color))
        }
        Command::Corpus { path, threads, common } => {
            emit(run_corpus(&path, &options(&common), format(&common), threads.unwrap_or_else(default_threads)))
        }
    }
}
