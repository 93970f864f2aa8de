//! SINR at the typical uplink base station and downlink mobile of one drop,
//! split into signal, base-station interference, mobile interference and
//! noise.
//!
//! `cargo run --example sinr_breakdown -- [seed]`

use compflex::channel::{downlink_sinr, uplink_sinr, ChannelParams, RayleighFading, SinrBreakdown};
use compflex::montecarlo::drop_rng;
use compflex::scenario::build_scenario;
use compflex::{Scheme, Window};

fn show(label: &str, b: &SinrBreakdown) {
    println!(
        "{label:<14} S={:.3e} I_bs={:.3e} ({} tx) I_ms={:.3e} ({} tx) N={:.3e} SINR={:.2} dB",
        b.signal,
        b.i_bs,
        b.bs_interferers.len(),
        b.i_ms,
        b.ms_interferers.len(),
        b.noise,
        b.sinr_db()
    );
}

fn main() -> compflex::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map_or(1, |s| s.parse().expect("seed"));
    let params = ChannelParams::reference();
    for (scheme, lambda) in [(Scheme::CompFlex, 0.02), (Scheme::FullDuplex, 0.01)] {
        let mut rng = drop_rng(seed, 0);
        let s = build_scenario(scheme, lambda, Window::new(50.0)?, &mut rng)?;
        let Some(t) = s.typical() else {
            println!("{scheme}: no typical pair in this drop");
            continue;
        };
        let mut fading = RayleighFading::new(params.mu, &mut rng)?;
        println!("{scheme}:");
        show("  uplink", &uplink_sinr(&s, t.ul_bs, &params, &mut fading)?);
        show(
            "  downlink",
            &downlink_sinr(&s, t.dl_ms, &params, &mut fading)?,
        );
    }
    Ok(())
}
