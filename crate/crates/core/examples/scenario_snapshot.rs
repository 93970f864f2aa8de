//! Builds one CoMPflex and one full-duplex snapshot and writes deployment,
//! pairing and scenario CSVs.
//!
//! `cargo run --example scenario_snapshot -- [out_dir] [seed]`

use std::path::PathBuf;

use compflex::montecarlo::drop_rng;
use compflex::output::{deployment_csv, pairing_csv, scenario_csv};
use compflex::scenario::build_scenario;
use compflex::{Scheme, Window};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "snapshot".into()));
    let seed: u64 = args.next().map_or(Ok(1), |s| s.parse())?;
    std::fs::create_dir_all(&out)?;

    for (scheme, lambda) in [(Scheme::CompFlex, 0.02), (Scheme::FullDuplex, 0.01)] {
        let mut rng = drop_rng(seed, 0);
        let s = build_scenario(scheme, lambda, Window::new(50.0)?, &mut rng)?;
        let tag = scheme.as_str();
        std::fs::write(
            out.join(format!("deployment_{tag}.csv")),
            deployment_csv(s.bs_positions()),
        )?;
        std::fs::write(out.join(format!("scenario_{tag}.csv")), scenario_csv(&s))?;
        if let Some(p) = s.pairing() {
            std::fs::write(out.join(format!("pairing_{tag}.csv")), pairing_csv(p))?;
        }
        println!(
            "{tag}: {} base stations, {} mobiles",
            s.bs_count(),
            s.mobiles().len()
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}
