use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod render;
mod verify;

use verify::Check;

/// Exit codes: 0 success, 1 invalid input, 2 verification failure or
/// internal inconsistency, 3 I/O failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] eig_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_input_error() => 1,
            CliError::Usage(_) => 1,
            CliError::Core(_) | CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed form, certified by a verified resolving set
    Auto,
    Formula,
    Brute,
    Constructive,
}

/// Essential ideal graphs of Z_n: construction, metric dimension and Zagreb
/// indices.
#[derive(Debug, Parser)]
#[command(name = "eig", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Largest vertex count T accepted
    #[arg(long, global = true, env = "EIG_MAX_T", default_value_t = 20_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_t: u64,

    /// Candidate-set budget for the exact dimension search
    /// [default: 10000000 for dim, 100000 for verify]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prime factorization and vertex counts
    Factor { n: u64 },
    /// Essential ideal graph (text, json or dot)
    Graph { n: u64 },
    /// Vertex classes by saturated prime set
    Classes { n: u64 },
    /// All-pairs distance table (text, json or csv)
    Distances { n: u64 },
    /// Metric dimension
    Dim {
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Check a given vertex set instead, as comma-separated generators
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<u64>>,
    },
    /// First and second Zagreb indices.
    ///
    /// CSV columns: n,k,T,M1_def,M2_def,M1_closed,M2_closed,M2_paper_convention,flags
    Zagreb { n: u64 },
    /// Annihilating ideal graph and the d -> n/d correspondence
    Aig { n: u64 },
    /// Cross-check closed forms against brute force over a range of n.
    ///
    /// With --format csv, one Zagreb row per n is written (columns as for
    /// `zagreb`) and the summary goes to stderr.
    Verify {
        lo: u64,
        hi: u64,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        checks: Vec<Check>,
    },
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let caps = eig_core::Caps {
        max_vertices: cli.max_t,
        ..Default::default()
    };
    let mut out = open_output(&cli.output)?;
    let ctx = render::Ctx {
        format: cli.format,
        caps,
        budget: cli.budget,
        to_file: cli.output.is_some(),
    };
    let result = match cli.command {
        Command::Factor { n } => render::factor_cmd(&ctx, &mut out, n),
        Command::Graph { n } => render::graph(&ctx, &mut out, n, false),
        Command::Aig { n } => render::graph(&ctx, &mut out, n, true),
        Command::Classes { n } => render::classes(&ctx, &mut out, n),
        Command::Distances { n } => render::distances(&ctx, &mut out, n),
        Command::Dim { n, method, set } => render::dim(&ctx, &mut out, n, method, set),
        Command::Zagreb { n } => render::zagreb(&ctx, &mut out, n),
        Command::Verify { lo, hi, checks } => verify::run(&ctx, &mut out, lo, hi, &checks),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
