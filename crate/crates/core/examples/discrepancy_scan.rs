//! Star discrepancy of constructed nets as the order grows.
//!
//! `cargo run --example discrepancy_scan -- [base] [d] [max_m]`

use netcontain::constructions::generate_net;
use netcontain::netcheck::star_discrepancy;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let base = args.first().copied().unwrap_or(2);
    let d = args.get(1).copied().unwrap_or(2) as usize;
    let max_m = args.get(2).copied().unwrap_or(6) as u32;

    println!("{:>3} {:>6} {:>12} {:>10}", "m", "N", "D*", "D*·N/m");
    for m in 1..=max_m {
        let net = generate_net(base, m, d)?;
        let disc = star_discrepancy(&net)?;
        let n = net.len() as f64;
        println!("{m:>3} {n:>6} {disc:>12.6} {:>10.4}", disc * n / m as f64);
    }
    Ok(())
}
