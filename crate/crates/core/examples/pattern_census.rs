//! Enumerate admissible patterns and tabulate how often pairs overlap.
//!
//! `cargo run --example pattern_census -- [base] [m] [d]`

use netcontain::grid::Params;
use netcontain::patterns::{count_patterns_upper, enumerate_patterns, overlap_census};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let params = Params::new(
        args.first().copied().unwrap_or(2),
        args.get(1).copied().unwrap_or(1) as u32,
        args.get(2).copied().unwrap_or(3) as usize,
    )?;

    let family = enumerate_patterns(&params)?;
    let bound = count_patterns_upper(&params);
    println!("{params:?}");
    println!("patterns: {} (upper bound {:.0})", family.len(), bound.value());
    for pat in family.iter().take(4) {
        let cells: Vec<_> = pat.cells().iter().map(|c| c.0.clone()).collect();
        println!("  {cells:?}");
    }

    let c = overlap_census(&family)?;
    println!("pairs sharing l cells:");
    for (l, n) in c.n_ell.iter().enumerate().filter(|(_, n)| **n > 0) {
        println!("  l={l:<3} {n}");
    }
    println!("cell multiplicity {}..{} (expected {})", c.multiplicity_min, c.multiplicity_max, c.multiplicity_expected);
    println!("Q = {}, disjoint-pair lower bound {:.2}", c.q, c.n0_lower_bound);
    Ok(())
}
