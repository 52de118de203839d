//! Build a net, check it, then break it by moving one point.
//!
//! `cargo run --example construct_and_verify -- [base] [m] [d]`

use netcontain::constructions::generate_net;
use netcontain::grid::{Params, Point};
use netcontain::netcheck::is_net;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let base = args.first().copied().unwrap_or(3);
    let m = args.get(1).copied().unwrap_or(2) as u32;
    let d = args.get(2).copied().unwrap_or(3) as usize;
    let params = Params::new(base, m, d)?;

    let mut net = generate_net(base, m, d)?;
    println!("(0,{m},{d})-net in base {base}: {} points", net.len());
    for p in net.points.iter().take(6) {
        println!("  {:?}", p.coords);
    }
    println!("is_net: {:?}", is_net(&net, &params)?.is_net);

    if net.len() > 1 {
        let moved = net.points[1].coords.clone();
        net.points[0] = Point::new(moved);
        let check = is_net(&net, &params)?;
        println!("after duplicating point 1 into slot 0: {}", serde_json::to_string(&check)?);
    }

    match generate_net(base, 2, base as usize + 2) {
        Ok(_) => println!("unexpected net in dimension b+2"),
        Err(e) => println!("dimension b+2: {e}"),
    }
    Ok(())
}
