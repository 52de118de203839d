//! Sample sizes at which a uniform set starts (and stops failing) to contain
//! a net, across bases and dimensions.

use netcontain::probability::{factorial_ratio_bound, necessary_n, sufficient_n};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = 0.1;
    println!("{:>3} {:>2} {:>2} {:>14} {:>14} {:>8}", "b", "d", "m", "necessary", "sufficient", "ratio");
    for b in [2u64, 3, 5, 7] {
        for d in [2usize, 3] {
            for m in [1u32, 2, 3] {
                let nec = necessary_n(b, d, m)?.as_f64();
                let suff = sufficient_n(b, d, m, eps)?;
                println!("{b:>3} {d:>2} {m:>2} {nec:>14.2} {suff:>14} {:>8.2}", suff as f64 / nec);
            }
        }
    }
    println!("\nb / (b!)^(1/b) against its exponential lower bound:");
    for b in [3, 4, 8, 16, 64] {
        let (lhs, rhs) = factorial_ratio_bound(b)?;
        println!("  b={b:<3} {lhs:.4} >= {rhs:.4}");
    }
    Ok(())
}
