//! Probability that N uniform balls in K bins hit every one of k given bins,
//! checked against exact rational arithmetic where that is cheap.

use netcontain::probability::{occupancy_exact, occupancy_rational};
use num_traits::ToPrimitive;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [(4, 2, 4), (16, 4, 32), (64, 8, 200), (1024, 32, 4096), (4096, 512, 60_000)];
    for (total, k, n) in cases {
        let p = occupancy_exact(total, k, n)?;
        print!("K={total:<5} k={k:<4} N={n:<6} p={p:.12}");
        if k <= 8 {
            let exact = occupancy_rational(total, k, n)?;
            let text = if k <= 2 { format!("{exact}") } else { format!("off by {:.1e}", (exact.to_f64().unwrap() - p).abs()) };
            print!("  rational: {text}");
        }
        println!();
    }
    Ok(())
}
