//! Monte Carlo success probability against SINR threshold for both schemes
//! and directions, with 95% intervals.
//!
//! `cargo run --release --example monte_carlo_curves -- [drops] [window_km]`

use compflex::channel::ChannelParams;
use compflex::montecarlo::{estimate_success, McConfig};
use compflex::{Direction, Scheme, Window};

fn main() -> compflex::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let drops = args.first().map_or(500, |s| s.parse().expect("drops"));
    let side = args.get(1).map_or(50.0, |s| s.parse().expect("window_km"));

    for (scheme, lambda) in [(Scheme::CompFlex, 0.02), (Scheme::FullDuplex, 0.01)] {
        let mut config = McConfig::new(
            scheme,
            lambda,
            Window::new(side)?,
            ChannelParams::reference(),
        );
        config.drops = drops;
        for dir in [Direction::Uplink, Direction::Downlink] {
            let curve = estimate_success(&config, dir)?;
            println!(
                "{scheme} {dir} ({} drops, {} skipped)",
                curve.drops, curve.skipped_drops
            );
            for p in &curve.points {
                println!(
                    "  {:>5} dB  {:.4}  [{:.4}, {:.4}]",
                    p.beta_db, p.p_success, p.ci_low, p.ci_high
                );
            }
        }
    }
    Ok(())
}
