//! Analytic success curves under the independent-PPP approximation, and the
//! α = 4 kernel closed form against quadrature.
//!
//! `cargo run --release --example analytic_curves`

use compflex::analytic::{
    analytic_curve, interference_kernel_integral, kernel_closed_form_alpha4, AnalyticParams,
};
use compflex::channel::ChannelParams;
use compflex::montecarlo::threshold_grid;
use compflex::quadrature::QuadratureSpec;
use compflex::{Direction, Scheme};

fn main() -> compflex::Result<()> {
    let quad = QuadratureSpec::default();
    let params = AnalyticParams::new(0.02, 0.01, &ChannelParams::reference())?;
    let grid = threshold_grid(-20.0, 20.0, 5.0);

    print!("{:>8}", "beta_db");
    for b in &grid {
        print!("{b:>8}");
    }
    println!();
    for scheme in [Scheme::CompFlex, Scheme::FullDuplex] {
        for dir in [Direction::Uplink, Direction::Downlink] {
            let c = analytic_curve(scheme, dir, &params, &grid, &quad)?;
            print!("{:>8}", format!("{}-{}", scheme.as_str(), dir.as_str()));
            for p in &c.points {
                print!("{:>8.4}", p.p_success);
            }
            println!("  ({})", c.source);
        }
    }

    println!("\nkernel check (c, r, lower): closed form vs quadrature");
    for (c, r, lower) in [(1.0, 1.0, 0.0), (10.0, 2.0, 1.0), (0.01, 5.0, 3.0)] {
        let closed = kernel_closed_form_alpha4(c, r, lower);
        let numeric = interference_kernel_integral(c, r, lower, 4.0, &quad)?;
        println!("  ({c}, {r}, {lower}): {closed:.12} vs {numeric:.12}");
    }
    Ok(())
}
