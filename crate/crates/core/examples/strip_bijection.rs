//! Two-dimensional patterns of order m are exactly the ways to stack b
//! order-(m-1) patterns side by side and choose one permutation per row.

use std::collections::BTreeSet;

use netcontain::grid::Params;
use netcontain::patterns::{count_patterns_exact_d2, enumerate_patterns, lps_compose, lps_decompose, strip_decompositions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (base, m) in [(2u64, 1u32), (2, 2), (3, 1), (2, 3)] {
        let family: BTreeSet<_> = enumerate_patterns(&Params::new(base, m, 2)?)?.into_iter().collect();
        let composed: BTreeSet<_> = strip_decompositions(base, m)?.iter().map(lps_compose).collect::<Result<_, _>>()?;
        let formula = count_patterns_exact_d2(base, m)?;
        println!(
            "b={base} m={m}: enumerated {:>4}, composed {:>4}, formula {:>4}, equal sets: {}",
            family.len(),
            composed.len(),
            formula.exact.map(|a| a.to_string()).unwrap_or_default(),
            family == composed
        );
    }

    let pat = enumerate_patterns(&Params::new(2, 2, 2)?)?.remove(5);
    let dec = lps_decompose(&pat)?;
    println!("\npattern {:?}", pat.cells().iter().map(|c| c.0.clone()).collect::<Vec<_>>());
    for (k, sub) in dec.subpatterns.iter().enumerate() {
        println!("  strip {k}: {:?}", sub.cells().iter().map(|c| c.0.clone()).collect::<Vec<_>>());
    }
    println!("  row permutations: {:?}", dec.perms);
    Ok(())
}
