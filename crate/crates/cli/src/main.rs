//! `kappamu`: emit catalog algebras and run verification pipelines on
//! algebra definition files.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! input errors (unreadable or malformed files, bad arguments).

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, EmitParams, Input, Output};
use report::Report;

/// Optional worker-thread override for the parallel curvature code.
const THREADS_ENV: &str = "KAPPAMU_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "kappamu",
    version,
    about = "Exact verification of left-invariant contact and soliton geometry"
)]
struct Cli {
    /// Print verdict lines only.
    #[arg(long, global = true)]
    quiet: bool,
    /// Omit wall time and timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List or emit catalog algebras.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Run one verification on a definition file.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        file: PathBuf,
        /// Soliton constant for `lauret` (defaults to the solved constant).
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Fit (kappa, mu) of the nullity condition.
    KappaMu { file: PathBuf },
    /// Ricci tensor and scalar curvature.
    Ricci { file: PathBuf },
    /// Sampled minimum of the sectional curvature.
    MinSec {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Local refinement steps per sample.
        #[arg(long, default_value_t = 20)]
        refine: usize,
    },
    /// Restrict to a' + nilradical and compare the Einstein criterion with a direct check.
    RankReduce {
        file: PathBuf,
        /// Comma-separated basis-label combinations, e.g. "T" or "A1+2*A2".
        #[arg(long, allow_hyphen_values = true)]
        aprime: String,
    },
    /// Check that a linear map is an isomorphism of contact metric algebras.
    VerifyIso {
        src: PathBuf,
        dst: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// D-homothetic deformation by `a` and the (kappa, mu) transformation law.
    Deform {
        file: PathBuf,
        #[arg(long)]
        a: String,
        /// Also write the deformed definition file here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// List families and parameter constraints.
    List,
    /// Write a family member as a definition file (or map file).
    Emit(EmitArgs),
}

#[derive(Debug, Args)]
struct EmitArgs {
    family: String,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "exact-sqrt2")]
    field: String,
    /// Output path (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckKind {
    Jacobi,
    Contact,
    Einstein,
    Soliton,
    Lauret,
    Iwasawa,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_ENV}: {e}")))
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Catalog(CatalogCommand::List) => Ok(if cli.quiet {
            Output::Document(commands::catalog_list_quiet())
        } else {
            commands::catalog_list()
        }),
        Command::Catalog(CatalogCommand::Emit(a)) => {
            let params = EmitParams {
                alpha: a.alpha.clone(),
                beta: a.beta.clone(),
                n: a.n,
                c: a.c.clone(),
                m: a.m,
                seed: a.seed,
            };
            let mut warnings = Vec::new();
            let out = commands::catalog_emit(&a.family, &a.field, &params, &mut warnings)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            match (&a.out, out) {
                (Some(path), Output::Document(text)) => {
                    std::fs::write(path, text).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    Ok(Output::Document(String::new()))
                }
                (_, out) => Ok(out),
            }
        }
        Command::Check { kind, file, c } => {
            let input = Input::read(file)?;
            match kind {
                CheckKind::Jacobi => commands::check_jacobi(&input),
                CheckKind::Contact => commands::check_contact(&input),
                CheckKind::Einstein => commands::check_einstein(&input),
                CheckKind::Soliton => commands::check_soliton(&input),
                CheckKind::Lauret => commands::check_lauret(&input, c.as_deref()),
                CheckKind::Iwasawa => commands::check_iwasawa(&input),
            }
        }
        Command::KappaMu { file } => commands::kappa_mu(&Input::read(file)?),
        Command::Ricci { file } => commands::ricci(&Input::read(file)?),
        Command::MinSec {
            file,
            samples,
            seed,
            refine,
        } => commands::min_sec(&Input::read(file)?, *samples, *seed, *refine),
        Command::RankReduce { file, aprime } => commands::rank_reduce(&Input::read(file)?, aprime),
        Command::VerifyIso { src, dst, map } => commands::verify_iso(&Input::read(src)?, &Input::read(dst)?, map),
        Command::Deform { file, a, emit } => commands::deform(&Input::read(file)?, a, emit.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = configure_threads().and_then(|()| dispatch(&cli));
    let mut stdout = std::io::stdout().lock();
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Ok(Output::Document(text)) => {
            if !text.is_empty() {
                let _ = writeln!(stdout, "{}", text.trim_end());
            }
            ExitCode::SUCCESS
        }
        Ok(Output::Report {
            command,
            inputs,
            report,
        }) => {
            let refs: Vec<&[u8]> = inputs.iter().map(Vec::as_slice).collect();
            let mut doc = Report::new(command, Some(report::digest(&refs)), report);
            if !cli.no_timestamp {
                doc.stamp(start.elapsed());
            }
            let text = if cli.quiet { doc.verdict_lines() } else { doc.to_json() };
            let _ = writeln!(stdout, "{}", text.trim_end());
            if doc.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
