//! Empirical link-distance distributions for both schemes compared with the
//! nearest-neighbour law 1 - exp(-λπr²).
//!
//! `cargo run --release --example distance_cdfs -- [drops]`

use compflex::analytic::distance_cdf;
use compflex::channel::ChannelParams;
use compflex::montecarlo::{estimate_distance_cdfs, McConfig};
use compflex::{Scheme, Window};

fn main() -> compflex::Result<()> {
    let drops = std::env::args()
        .nth(1)
        .map_or(2000, |s| s.parse().expect("drops"));
    for (scheme, lambda) in [(Scheme::CompFlex, 0.02), (Scheme::FullDuplex, 0.01)] {
        let mut config = McConfig::new(
            scheme,
            lambda,
            Window::new(50.0)?,
            ChannelParams::reference(),
        );
        config.drops = drops;
        let d = estimate_distance_cdfs(&config)?;
        let signal = d.signal();
        println!("{scheme}:");
        println!(
            "  signal links {}: KS vs nearest-neighbour law {:.4}",
            signal.len(),
            signal.ks_against(|r| distance_cdf(r, lambda))
        );
        for cdf in d.all() {
            let median = cdf
                .samples()
                .get(cdf.len() / 2)
                .copied()
                .unwrap_or(f64::NAN);
            println!(
                "  {:<24} n={:<7} median {median:.3} km",
                cdf.link_type.as_str(),
                cdf.len()
            );
        }
    }
    Ok(())
}
