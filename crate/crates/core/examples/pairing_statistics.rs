//! Pairs base stations over many deployments and reports pair/unpaired
//! fractions and the uplink share.
//!
//! `cargo run --example pairing_statistics -- [seeds]`

use compflex::geometry::{sample_ppp, voronoi_adjacency};
use compflex::pairing::{assign_directions, pair_base_stations};
use compflex::{Direction, Window};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> compflex::Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .map_or(100, |s| s.parse().expect("seeds"));
    let window = Window::new(200.0)?;
    let (mut bs, mut unpaired, mut ul) = (0usize, 0usize, 0usize);
    for seed in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let adj = voronoi_adjacency(&sample_ppp(0.02, window, &mut rng)?)?;
        let net = assign_directions(pair_base_stations(&adj, &mut rng), &mut rng)?;
        net.validate(&adj)?;
        bs += net.bs_count();
        unpaired += net.unpaired().len();
        ul += net.count(Direction::Uplink);
    }
    println!("deployments: {seeds}, base stations: {bs}");
    println!("unpaired fraction: {:.4}", unpaired as f64 / bs as f64);
    println!("uplink fraction: {:.4}", ul as f64 / bs as f64);
    Ok(())
}
