//! Draws one Poisson deployment, tessellates it and prints cell statistics.
//!
//! `cargo run --example voronoi_deployment -- [seed] [window_km] [lambda]`

use compflex::geometry::{sample_ppp, voronoi_adjacency};
use compflex::output::deployment_csv;
use compflex::Window;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> compflex::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let seed = args.first().map_or(1, |s| s.parse().expect("seed"));
    let side = args.get(1).map_or(50.0, |s| s.parse().expect("window_km"));
    let lambda = args.get(2).map_or(0.02, |s| s.parse().expect("lambda"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window = Window::new(side)?;
    let deployment = sample_ppp(lambda, window, &mut rng)?;
    let adj = voronoi_adjacency(&deployment)?;

    let n = adj.len();
    let degrees: Vec<usize> = (0..n).map(|i| adj.neighbors(i).len()).collect();
    let mean_degree = degrees.iter().sum::<usize>() as f64 / n as f64;
    let area: f64 = adj.cells().iter().map(|c| c.area()).sum();
    println!("sites: {n} (expected {:.1})", lambda * window.area());
    println!("mean neighbours: {mean_degree:.2}");
    println!("tiled area: {area:.3} of {:.3} km^2", window.area());
    println!("max degree: {}", degrees.iter().max().unwrap_or(&0));
    if std::env::var_os("DUMP").is_some() {
        print!("{}", deployment_csv(deployment.points()));
    }
    Ok(())
}
