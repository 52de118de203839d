//! Exact containment probability next to its second-moment and first-moment
//! bounds, for a range of sample sizes.

use netcontain::grid::Params;
use netcontain::probability::{exact_containment_bruteforce, na_bounds_p, pz_sandwich};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (b, m, d) in [(2, 1, 2), (2, 1, 3), (2, 2, 1)] {
        let params = Params::new(b, m, d)?;
        println!("b={b} m={m} d={d}");
        println!("{:>4} {:>10} {:>10} {:>10} {:>10} {:>10}", "N", "p_N", "lower", "exact", "upper", "A p_N");
        for n in [2, 4, 8, 16, 32] {
            let s = pz_sandwich(&params, n)?;
            let exact = exact_containment_bruteforce(&params, n)?;
            let occ = na_bounds_p(&params, n);
            debug_assert!(occ.lower <= s.p_target && s.p_target <= occ.upper);
            println!(
                "{n:>4} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.4}",
                s.p_target,
                s.pz_lower,
                exact,
                s.markov_upper,
                s.mean_count.value()
            );
        }
        println!();
    }
    Ok(())
}
