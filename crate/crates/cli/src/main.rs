mod cache;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use borwein_core::ring::DEFAULT_BITS;
use borwein_core::symbolic::{Domain, DEFAULT_SYMBOLIC_ORDER};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::cache::Cache;
use crate::commands::{ExponentChoice, Outcome};
use crate::config::{parse_grid, usage, Exponent, Format, Resolved, RingKind, UsageError};

const EXIT_USAGE: u8 = 3;
const EXIT_FAILURE: u8 = 4;

/// Exact q-series verification for fractional powers of (q, q²; q³)_∞.
///
/// Exit status: 0 verified, 1 violation, 2 inconclusive, 3 usage error,
/// 4 other failure.
#[derive(Parser)]
#[command(name = "borwein", version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Directory for cached expansions (no caching when unset)
    #[arg(long, global = true, env = "BORWEIN_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads for `scan`
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,

    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExponentArgs {
    /// Exponent: p/q, a decimal, `critical` for (9-√73)/2, or `d` for the formal variable
    #[arg(long, allow_hyphen_values = true, required_unless_present = "quadratic")]
    d: Option<String>,

    /// Quadratic exponent a + b·√D given as `a,b,D`
    #[arg(long, conflicts_with = "d", allow_hyphen_values = true)]
    quadratic: Option<String>,

    #[arg(long, value_enum)]
    ring: Option<RingKind>,

    /// Interval precision in bits (interval ring only)
    #[arg(long, default_value_t = DEFAULT_BITS)]
    bits: u32,
}

impl ExponentArgs {
    fn choice(&self) -> anyhow::Result<ExponentChoice> {
        let exponent = match (&self.d, &self.quadratic) {
            (_, Some(q)) => Exponent::parse_quadratic(q)?,
            (Some(d), None) => Exponent::parse(d)?,
            (None, None) => return Err(usage("give --d or --quadratic")),
        };
        let resolved = Resolved::new(&exponent, self.ring, self.bits)?;
        Ok(ExponentChoice { exponent, resolved })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of (q, q²; q³)_∞^d through q^N
    Expand {
        #[command(flatten)]
        exponent: ExponentArgs,
        #[arg(short = 'N', long)]
        order: usize,
    },
    /// Components A, B, C of the 3-dissection with signs (+, -, -)
    Dissect {
        #[command(flatten)]
        exponent: ExponentArgs,
        #[arg(short = 'N', long)]
        order: usize,
    },
    /// Check every dissection coefficient through q^N for nonnegativity
    Verify {
        #[command(flatten)]
        exponent: ExponentArgs,
        #[arg(short = 'N', long)]
        order: usize,
    },
    /// Check the finite product (q, q²; q³)_n, or its square
    Finite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        squared: bool,
    },
    /// Exact d-region where the first N sign-adjusted coefficients are nonnegative
    Region {
        #[arg(short = 'N', long, default_value_t = DEFAULT_SYMBOLIC_ORDER)]
        order: usize,
        /// Search interval `lo:hi`
        #[arg(long, default_value = "0:4", allow_hyphen_values = true)]
        domain: String,
    },
    /// Verify many exponents, in parallel, and report the worst status
    Scan {
        /// Comma-separated exponents (p/q, decimals, `critical`)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        d: Vec<String>,
        /// Evenly spaced exponents `lo:hi:count`
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[arg(short = 'N', long)]
        order: usize,
        #[arg(long, value_enum)]
        ring: Option<RingKind>,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
    /// Jacobi triple product identity at z = ±1
    Jtp {
        #[arg(short = 'N', long, default_value_t = 200)]
        order: usize,
        /// Only this z (1 or -1); both by default
        #[arg(long, allow_hyphen_values = true)]
        z: Option<i64>,
        /// Summation bound K for the theta side
        #[arg(long)]
        bound: Option<usize>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let cache = Cache::new(cli.cache_dir.clone());
    match &cli.command {
        Command::Expand { exponent, order } => commands::expand(&exponent.choice()?, *order, &cache),
        Command::Dissect { exponent, order } => commands::dissect(&exponent.choice()?, *order, &cache),
        Command::Verify { exponent, order } => commands::verify(&exponent.choice()?, *order, &cache),
        Command::Finite { n, squared } => commands::finite(*n, *squared),
        Command::Region { order, domain } => {
            let domain = Domain::parse(domain).map_err(|e| usage(e.to_string()))?;
            commands::region(*order, &domain)
        }
        Command::Scan { d, grid, order, ring, bits } => {
            let mut exponents = d.iter().map(|s| Exponent::parse(s)).collect::<anyhow::Result<Vec<_>>>()?;
            if let Some(g) = grid {
                exponents.extend(parse_grid(g)?.into_iter().map(Exponent::Rational));
            }
            let choices = exponents
                .into_iter()
                .map(|exponent| Ok(ExponentChoice { resolved: Resolved::new(&exponent, *ring, *bits)?, exponent }))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let jobs = cli
                .jobs
                .map(usize::from)
                .unwrap_or_else(|| std::thread::available_parallelism().map(usize::from).unwrap_or(1));
            commands::scan(&choices, *order, &cache, jobs)
        }
        Command::Jtp { order, z, bound } => commands::jtp(*order, *z, *bound),
    }
}

fn render(outcome: &Outcome, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Text => outcome.text.clone(),
        Format::Json => serde_json::to_string_pretty(&outcome.json)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &outcome.csv {
                w.write_record(r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = run(&cli).and_then(|outcome| {
        let out = render(&outcome, cli.format)?;
        match &cli.output {
            Some(path) => std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{out}"),
        }
        Ok(outcome.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<UsageError>() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAILURE)
            }
        }
    }
}
