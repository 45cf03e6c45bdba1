//! `durfee`: exact h-index statistics from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use durfee_core::{IntervalRule, SamplingMethod, Target, DEFAULT_EPSILON};

use output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "durfee",
    version,
    about = "Exact Durfee-square statistics for h-index analysis"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Outside mass allowed for confidence intervals.
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// How interval endpoints are chosen.
    #[arg(long, global = true, value_enum, default_value_t = Rule::Symmetric)]
    rule: Rule,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rule {
    /// Cut eps/2 from each tail.
    Symmetric,
    /// Narrowest interval with enough mass.
    Minwidth,
}

impl From<Rule> for IntervalRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Symmetric => IntervalRule::Symmetric,
            Rule::Minwidth => IntervalRule::MinWidth,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Unranking,
    Boltzmann,
}

impl From<Method> for SamplingMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Unranking => SamplingMethod::RecursiveUnranking,
            Method::Boltzmann => SamplingMethod::BoltzmannRejection,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact partition numbers next to the Hardy-Ramanujan approximation.
    Pn {
        #[arg(required = true)]
        n: Vec<u64>,
    },
    /// Distribution of the Durfee square size over partitions of N.
    Dist { n: u64 },
    /// Confidence interval for h given N citations.
    Interval {
        #[arg(required = true)]
        n: Vec<u64>,
    },
    /// P(h >= T) for a uniform random partition of N.
    Tail { n: u64, t: u64 },
    /// Rule-of-thumb estimate 0.54 sqrt(N).
    Estimate {
        #[arg(required = true)]
        n: Vec<u64>,
    },
    /// Assess one scholar, or every profile in a file ("name: c1 c2 ...").
    Analyze {
        #[arg(conflicts_with_all = ["citations", "h"])]
        profile_file: Option<PathBuf>,
        #[arg(long, requires = "h")]
        citations: Option<u64>,
        #[arg(long, requires = "citations")]
        h: Option<u64>,
        #[arg(long, requires = "nonbook_h")]
        nonbook_citations: Option<u64>,
        #[arg(long, requires = "nonbook_citations")]
        nonbook_h: Option<u64>,
        #[arg(long, default_value = "scholar")]
        name: String,
    },
    /// Assess every row of a cohort CSV and correlate estimate with h.
    Cohort {
        csv: PathBuf,
        /// Also report the correlation on non-book figures.
        #[arg(long)]
        nonbook: bool,
        /// Write (estimate, h) points to this CSV for plotting.
        #[arg(long, value_name = "PATH")]
        scatter: Option<PathBuf>,
    },
    /// Draw uniform random partitions and tabulate their Durfee sizes.
    Sample {
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Method::Unranking)]
        method: Method,
        /// Add the exact distribution and the total-variation distance.
        #[arg(long)]
        compare_exact: bool,
    },
    /// Recompute a published table and diff it cell by cell.
    Reproduce {
        #[arg(value_parser = parse_target)]
        target: Target,
    },
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: durfee_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
