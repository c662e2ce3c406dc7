//! Command-line front door: `generate` family catalogs, `verify` them.
//!
//! Exit codes: 0 verification passed (or generation succeeded), 1
//! verification ran and failed, 2 usage or I/O error.  Diagnostics go to
//! stderr; the report (or catalog) goes to stdout unless `--out` is given.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::Tolerance;
use crate::catalog::{self, load_catalog, save_catalog, Catalog, Precision};
use crate::report::{emit_report, parse_suites, run_suites, ReportFormat};

#[derive(Parser)]
#[command(name = "mtc-forge", version, about = "Build and verify skeletal modular tensor category catalogs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family catalog and write it as canonical JSON.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Load a catalog and run verification suites against it.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Family {
    /// Affine su(2) at level K: modular and skeletal data.
    Su2 {
        #[arg(long)]
        level: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Virasoro minimal model M(m, m+1): modular data only.
    Minimal {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The one-object trivial theory.
    Trivial {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Catalog JSON to verify.
    path: PathBuf,
    /// Suite to run (repeatable); omitted or `all` runs everything.
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Override both tolerance epsilons.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the catalog's precision request.
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
    /// Worker threads for the verification sweeps (0 = auto).  Defaults to
    /// the MTC_FORGE_JOBS environment variable, then to auto.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

enum CliError {
    /// Usage or I/O problem (exit 2).
    Usage(String),
    /// Verification ran and failed (exit 1).
    Failed,
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn generate(family: Family) -> Result<(), CliError> {
    let (catalog, out): (Catalog, Option<PathBuf>) = match family {
        Family::Su2 { level, out } => (
            catalog::su2(level).map_err(|e| CliError::Usage(e.to_string()))?,
            out,
        ),
        Family::Minimal { m, out } => (
            catalog::minimal(m).map_err(|e| CliError::Usage(e.to_string()))?,
            out,
        ),
        Family::Trivial { out } => (catalog::trivial(), out),
    };
    let bytes = save_catalog(&catalog).map_err(|e| CliError::Usage(e.to_string()))?;
    write_output(&out, &bytes)
}

fn resolve_jobs(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("MTC_FORGE_JOBS") {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("MTC_FORGE_JOBS must be a non-negative integer, got {v:?}"))
        }),
        Err(_) => Ok(0),
    }
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let suites = parse_suites(&args.suites).map_err(CliError::Usage)?;
    let tol = match args.tol {
        Some(eps) if eps > 0.0 && eps.is_finite() => Tolerance::uniform(eps),
        Some(eps) => return Err(CliError::Usage(format!("--tol must be positive, got {eps}"))),
        None => Tolerance::default(),
    };
    let jobs = resolve_jobs(args.jobs)?;

    let bytes = std::fs::read(&args.path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.path.display())))?;
    let cat = load_catalog(&bytes).map_err(|e| CliError::Usage(e.to_string()))?;

    let precision = match args.precision {
        Some(PrecisionArg::Double) => Precision::Double,
        Some(PrecisionArg::Extended) => Precision::Extended,
        None => cat.precision,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot configure {jobs} worker threads: {e}")))?;
    let report = pool
        .install(|| run_suites(&cat, &suites, &tol, precision))
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let format = match args.format {
        FormatArg::Json => ReportFormat::Json,
        FormatArg::Text => ReportFormat::Text,
    };
    write_output(&args.out, &emit_report(&report, format))?;
    if report.overall {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}

/// Parse `std::env::args` and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate { family } => generate(family),
        Command::Verify(args) => verify(args),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Failed) => 1,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
