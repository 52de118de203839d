//! Monte Carlo containment frequencies over a range of N, printed as CSV.
//!
//! `cargo run --release --example containment_sweep -- [trials] [seed]`

use netcontain::experiments::{records_to_csv, sweep};
use netcontain::grid::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let trials = args.first().copied().unwrap_or(2000);
    let seed = args.get(1).copied().unwrap_or(42);

    let params = Params::new(2, 2, 2)?;
    let report = sweep(&params, &[8, 16, 24, 32, 48, 64, 96], trials, seed, 0.1)?;
    print!("{}", records_to_csv(&report.records));
    eprintln!(
        "necessary N ~ {:.1} (row {:?}), sufficient N = {} (row {:?})",
        report.necessary_n, report.nearest_necessary_row, report.sufficient_n, report.nearest_sufficient_row
    );
    Ok(())
}
