//! Batch front end: runs one computation, prints the JSON report to stdout
//! and a human-readable summary to stderr.
//!
//! Exit codes: 0 when every assertable check passes, 1 when at least one
//! fails (or an internal error occurs), 2 for usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use symderiv::cache::CacheStore;
use symderiv::cli::{
    cmd_abelianize, cmd_conjecture, cmd_decompose, cmd_dims, cmd_polygon, cmd_verify_paper,
    AlgebraSel, RunContext, Tier,
};
use symderiv::report::Report;

#[derive(Parser)]
#[command(
    name = "symderiv",
    version,
    about = "Exact computations in the graded Lie algebras of derivations of free algebras"
)]
struct Cli {
    /// Directory for cached bases.
    #[arg(
        long,
        global = true,
        env = "SYMDERIV_CACHE",
        default_value = ".symderiv-cache"
    )]
    cache_dir: PathBuf,

    /// Disable the on-disk cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Verification tier: fast, or full (adds the genus-4 end-to-end run
    /// and the nine-gon).
    #[arg(long, global = true, default_value = "fast")]
    tier: String,

    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,

    /// Worker threads for the parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpaceArgs {
    /// Genus of the symplectic space.
    #[arg(long, conflicts_with = "plain")]
    genus: Option<u16>,

    /// Dimension of a plain space (no pairing).
    #[arg(long)]
    plain: Option<u16>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table of the graded pieces, with counting cross-checks.
    Dims {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Weight piece of the abelianization of the positive-degree part.
    Abelianize {
        /// Symplectic associative algebra at this genus.
        #[arg(long, conflicts_with_all = ["plain", "lie"])]
        sympl: Option<u16>,
        /// Plain associative derivation algebra at this dimension.
        #[arg(long, conflicts_with = "lie")]
        plain: Option<u16>,
        /// Symplectic Lie-derivation algebra at this genus.
        #[arg(long)]
        lie: Option<u16>,
        #[arg(long)]
        weight: usize,
        /// Force combinatorially expensive weights.
        #[arg(long)]
        allow_expensive: bool,
    },
    /// Run the whole identity battery for the current tier.
    VerifyPaper,
    /// Cyclic polygon contractions on the alternating wedge sums.
    Polygon {
        /// Inclusive range, e.g. `2..8`, or a single value.
        #[arg(long)]
        k: String,
        /// Use symmetrized factors instead of wedges.
        #[arg(long)]
        s2h: bool,
        /// Also evaluate the disconnected two-cycle contractions.
        #[arg(long)]
        disconnected: bool,
    },
    /// Weight-2 abelianization of the plain algebra against the square.
    Conjecture {
        #[arg(long)]
        n: u16,
    },
    /// Isotypic dimension bookkeeping for the quadratic part.
    Decompose {
        #[arg(long)]
        genus: u16,
    },
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    if let Some((a, b)) = text.split_once("..") {
        let lo = a.trim().parse().map_err(|_| format!("bad range {text}"))?;
        let hi = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| format!("bad range {text}"))?;
        Ok((lo, hi))
    } else {
        let k = text
            .trim()
            .parse()
            .map_err(|_| format!("bad range {text}"))?;
        Ok((k, k))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(threads) = cli.threads {
        // Ignore the error when a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let tier = match cli.tier.as_str() {
        "fast" => Tier::Fast,
        "full" => Tier::Full,
        other => {
            eprintln!("error: unknown tier `{other}` (use fast or full)");
            return ExitCode::from(2);
        }
    };

    let cache = if cli.no_cache {
        CacheStore::disabled()
    } else {
        match CacheStore::at(cli.cache_dir.clone()) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: cannot open cache directory: {e}");
                return ExitCode::from(2);
            }
        }
    };
    let ctx = RunContext { cache, tier };

    let result = match &cli.command {
        Command::Dims { space, max_degree } => match (space.genus, space.plain) {
            (Some(g), None) => cmd_dims(&ctx, AlgebraSel::Sympl(g), *max_degree),
            (None, Some(n)) => cmd_dims(&ctx, AlgebraSel::Plain(n), *max_degree),
            _ => {
                eprintln!("error: pass exactly one of --genus or --plain");
                return ExitCode::from(2);
            }
        },
        Command::Abelianize {
            sympl,
            plain,
            lie,
            weight,
            allow_expensive,
        } => {
            let sel = match (sympl, plain, lie) {
                (Some(g), None, None) => AlgebraSel::Sympl(*g),
                (None, Some(n), None) => AlgebraSel::Plain(*n),
                (None, None, Some(g)) => AlgebraSel::Lie(*g),
                _ => {
                    eprintln!("error: pass exactly one of --sympl, --plain, --lie");
                    return ExitCode::from(2);
                }
            };
            cmd_abelianize(&ctx, sel, *weight, *allow_expensive)
        }
        Command::VerifyPaper => cmd_verify_paper(&ctx),
        Command::Polygon {
            k,
            s2h,
            disconnected,
        } => match parse_range(k) {
            Ok((lo, hi)) => cmd_polygon(&ctx, lo, hi, *s2h, *disconnected),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        Command::Conjecture { n } => cmd_conjecture(&ctx, *n),
        Command::Decompose { genus } => cmd_decompose(&ctx, *genus),
    };

    match result {
        Ok(report) => emit(&cli, &report),
        Err(symderiv::Error::BadParameter(msg)) | Err(symderiv::Error::Unsupported(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> ExitCode {
    for line in report.summary_lines() {
        eprintln!("{line}");
    }
    let json = report.to_json();
    println!("{json}");
    if let Some(path) = &cli.json_out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(1);
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} check(s) failed", report.failures().len());
        ExitCode::from(1)
    }
}
