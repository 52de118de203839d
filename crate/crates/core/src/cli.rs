//! Command-line front end. Writes JSON or CSV to stdout (or `--out`).
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{generate_net, sample_uniform, PointSetJson};
use crate::error::Error;
use crate::experiments::{estimate_containment_with, records_to_csv, sweep_with};
use crate::grid::{Params, PointSet};
use crate::logdomain::LogValue;
use crate::netcheck::{is_net, star_discrepancy};
use crate::patterns::{
    check_enumerable, count_patterns_exact_d2, count_patterns_upper, enumerate_patterns,
    overlap_census, PatternCount,
};
use crate::probability::{
    exact_containment_for_family, factorial_ratio_bound, na_bounds_p, necessary_n, pz_sandwich,
    sufficient_n, OccupancyBounds, SandwichReport, BRUTEFORCE_MAX_PATTERNS,
};
use crate::search::{find_net_subset, SearchResultJson, Strategy};

#[derive(Debug, Parser)]
#[command(name = "netcontain", version, about = "When do random point sets contain (0,m,d)-nets?")]
struct Cli {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for Monte Carlo trials; output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Enumerate,
    Backtrack,
    Auto,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Enumerate => Strategy::Enumerate,
            StrategyArg::Backtrack => Strategy::Backtrack,
            StrategyArg::Auto => Strategy::Auto,
        }
    }
}

#[derive(Debug, Args)]
struct Grid {
    #[arg(short = 'b', long = "base")]
    base: u64,
    #[arg(short = 'm')]
    m: u32,
    #[arg(short = 'd')]
    d: usize,
}

impl Grid {
    fn params(&self) -> Result<Params, Error> {
        Params::new(self.base, self.m, self.d)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check whether a point set is a (0,m,d)-net.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'b', long = "base")]
        base: Option<u64>,
        #[arg(short = 'm')]
        m: Option<u32>,
    },
    /// Exact star discrepancy of a small point set.
    Discrepancy {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build a (0,m,d)-net with exact coordinates.
    Construct {
        #[command(flatten)]
        grid: Grid,
    },
    /// Draw N uniform points.
    Sample {
        #[command(flatten)]
        grid: Grid,
        #[arg(short = 'N')]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Admissible pattern counts, listings and overlap census.
    Patterns {
        #[arg(value_enum)]
        action: PatternAction,
        #[command(flatten)]
        grid: Grid,
    },
    /// Occupancy bounds and the first/second moment sandwich.
    Bounds {
        #[command(flatten)]
        grid: Grid,
        #[arg(short = 'N')]
        n: u64,
    },
    /// Sufficient and necessary sample sizes.
    Thresholds {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Search a point set for a net subset.
    Find {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'b', long = "base")]
        base: u64,
        #[arg(short = 'm')]
        m: u32,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Monte Carlo estimate of the containment probability.
    Simulate {
        #[command(flatten)]
        grid: Grid,
        #[arg(short = 'N')]
        n: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Monte Carlo estimates over a list of N.
    Sweep {
        #[command(flatten)]
        grid: Grid,
        /// Strictly increasing sample sizes, comma separated.
        #[arg(short = 'N', value_delimiter = ',', num_args = 0..)]
        n: Vec<u64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PatternAction {
    Count,
    Enumerate,
    Census,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("{0}")]
    Io(String),
}

#[derive(Serialize)]
struct CountOutput {
    b: u64,
    m: u32,
    d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_d2: Option<PatternCount>,
    upper_bound: LogValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumerated: Option<usize>,
}

#[derive(Serialize)]
struct BoundsOutput {
    #[serde(flatten)]
    sandwich: SandwichReport,
    occupancy_bounds: OccupancyBounds,
    exact: Option<f64>,
}

#[derive(Serialize)]
struct ThresholdsOutput {
    b: u64,
    m: u32,
    d: usize,
    eps: f64,
    /// The limit statement needs eps > 0.
    eps_positive: bool,
    #[serde(rename = "sufficient_N")]
    sufficient: u64,
    #[serde(rename = "necessary_N")]
    necessary: f64,
    necessary_log: LogValue,
    necessary_closed_form: LogValue,
    necessary_closed_form_is_equality: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    factorial_ratio: Option<(f64, f64)>,
}

fn read_points(path: &PathBuf) -> Result<PointSetJson, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(Error::InvalidInput(format!("{}: {e}", path.display()))))
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Verify { input, base, m } => {
            let raw = read_points(input)?;
            let base = base.or(raw.b).ok_or_else(|| {
                Error::InvalidParams("base missing: pass --base or set \"b\" in the input".into())
            })?;
            let m = m.or(raw.m).ok_or_else(|| {
                Error::InvalidParams("order missing: pass -m or set \"m\" in the input".into())
            })?;
            let points = raw.into_point_set()?;
            let params = Params::new(base, m, points.d)?;
            json(&is_net(&points, &params)?)
        }
        Command::Discrepancy { input } => {
            let points = read_points(input)?.into_point_set()?;
            #[derive(Serialize)]
            struct Out {
                n: usize,
                d: usize,
                star_discrepancy: f64,
            }
            json(&Out { n: points.len(), d: points.d, star_discrepancy: star_discrepancy(&points)? })
        }
        Command::Construct { grid } => {
            let net = generate_net(grid.base, grid.m, grid.d)?;
            json(&PointSetJson::from_point_set(&net, Some(grid.base), Some(grid.m)))
        }
        Command::Sample { grid, n, seed } => {
            grid.params()?;
            let set = sample_uniform(grid.d, *seed, *n)?;
            json(&PointSetJson::from_point_set(&set, Some(grid.base), Some(grid.m)))
        }
        Command::Patterns { action, grid } => {
            let params = grid.params()?;
            match action {
                PatternAction::Count => {
                    let exact_d2 =
                        (grid.d == 2).then(|| count_patterns_exact_d2(grid.base, grid.m)).transpose()?;
                    let enumerated = match check_enumerable(&params) {
                        Ok(()) => Some(enumerate_patterns(&params)?.len()),
                        Err(_) => None,
                    };
                    json(&CountOutput {
                        b: grid.base,
                        m: grid.m,
                        d: grid.d,
                        exact_d2,
                        upper_bound: count_patterns_upper(&params),
                        enumerated,
                    })
                }
                PatternAction::Enumerate => json(&enumerate_patterns(&params)?),
                PatternAction::Census => json(&overlap_census(&enumerate_patterns(&params)?)?),
            }
        }
        Command::Bounds { grid, n } => {
            let params = grid.params()?;
            let exact = match check_enumerable(&params) {
                Ok(()) => {
                    let family = enumerate_patterns(&params)?;
                    if family.len() <= BRUTEFORCE_MAX_PATTERNS {
                        Some(exact_containment_for_family(&params, &family, *n)?)
                    } else {
                        None
                    }
                }
                Err(_) => None,
            };
            json(&BoundsOutput {
                sandwich: pz_sandwich(&params, *n)?,
                occupancy_bounds: na_bounds_p(&params, *n),
                exact,
            })
        }
        Command::Thresholds { grid, eps } => {
            let necessary = necessary_n(grid.base, grid.d, grid.m)?;
            json(&ThresholdsOutput {
                b: grid.base,
                m: grid.m,
                d: grid.d,
                eps: *eps,
                eps_positive: *eps > 0.0,
                sufficient: sufficient_n(grid.base, grid.d, grid.m, *eps)?,
                necessary: necessary.as_f64(),
                necessary_log: necessary.value,
                necessary_closed_form: necessary.closed_form,
                necessary_closed_form_is_equality: necessary.closed_form_is_equality,
                factorial_ratio: (grid.base >= 3).then(|| factorial_ratio_bound(grid.base)).transpose()?,
            })
        }
        Command::Find { input, base, m, strategy } => {
            let points: PointSet = read_points(input)?.into_point_set()?;
            let params = Params::new(*base, *m, points.d)?;
            let found = find_net_subset(&points, &params, (*strategy).into())?;
            json(&SearchResultJson::from(found.as_ref()))
        }
        Command::Simulate { grid, n, trials, seed, strategy } => {
            let record = estimate_containment_with(&grid.params()?, *n, *trials, *seed, (*strategy).into())?;
            match cli.format {
                Format::Json => json(&record),
                Format::Csv => Ok(records_to_csv(std::slice::from_ref(&record))),
            }
        }
        Command::Sweep { grid, n, trials, seed, eps, strategy } => {
            let report = sweep_with(&grid.params()?, n, *trials, *seed, *eps, (*strategy).into())?;
            match cli.format {
                Format::Json => json(&report),
                Format::Csv => Ok(records_to_csv(&report.records)),
            }
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                2
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let result = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Io(format!("cannot start {threads} threads: {e}"))),
        },
        None => execute(&cli),
    };
    let output = match result {
        Ok(output) => output,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, output.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(output.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
