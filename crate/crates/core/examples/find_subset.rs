//! Hide a net among random points and recover it with both search strategies.
//!
//! `cargo run --example find_subset -- [m] [noise] [seed]`

use netcontain::constructions::{generate_net, sample_uniform};
use netcontain::grid::{Params, PointSet};
use netcontain::search::{find_net_subset, SearchResultJson, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let m = args.first().copied().unwrap_or(2) as u32;
    let noise = args.get(1).copied().unwrap_or(20) as usize;
    let seed = args.get(2).copied().unwrap_or(1);
    let params = Params::new(2, m, 2)?;

    let mut points = sample_uniform(2, seed, noise)?.points;
    points.extend(generate_net(2, m, 2)?.points);
    let set = PointSet::new(2, points)?;

    for strategy in [Strategy::Enumerate, Strategy::Backtrack] {
        let found = find_net_subset(&set, &params, strategy)?;
        println!("{strategy:?}: {}", serde_json::to_string(&SearchResultJson::from(found.as_ref()))?);
    }

    let sparse = sample_uniform(2, seed, 3)?;
    let none = find_net_subset(&sparse, &params, Strategy::Auto)?;
    println!("three random points: found = {}", none.is_some());
    Ok(())
}
