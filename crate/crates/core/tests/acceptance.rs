//! Acceptance suite. Prints one PASS/FAIL line per criterion. Runs at desk
//! scale: 50 km window, 2000 drops.
//!
//! Criteria that fail are reported but do not fail `cargo test`; set
//! `ACCEPTANCE_STRICT=1` to exit non-zero on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use compflex::analytic::{
    analytic_curve, distance_cdf, interference_kernel_integral, kernel_closed_form_alpha4,
    AnalyticParams,
};
use compflex::channel::ChannelParams;
use compflex::config::{RunConfig, DESK_DROPS, DESK_WINDOW_KM};
use compflex::geometry::{sample_ppp, voronoi_adjacency, Window};
use compflex::montecarlo::{estimate_distance_cdfs, estimate_success, DistanceCdfs, McConfig};
use compflex::pairing::{assign_directions, pair_base_stations, Direction};
use compflex::quadrature::QuadratureSpec;
use compflex::results::{ks_two_sample_critical, radius_grid, EmpiricalCdf, SuccessCurve};
use compflex::run::run;
use compflex::Scheme;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LAMBDA_C: f64 = 0.02;
const LAMBDA_F: f64 = 0.01;
const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn desk(scheme: Scheme) -> McConfig {
    let lambda = match scheme {
        Scheme::CompFlex => LAMBDA_C,
        Scheme::FullDuplex => LAMBDA_F,
    };
    let mut c = McConfig::new(
        scheme,
        lambda,
        Window::new(DESK_WINDOW_KM).unwrap(),
        ChannelParams::reference(),
    );
    c.drops = DESK_DROPS;
    c.seed = SEED;
    c
}

fn analytic_params(channel: &ChannelParams) -> AnalyticParams {
    AnalyticParams::new(LAMBDA_C, LAMBDA_F, channel).unwrap()
}

/// Distance samples with at least `min_samples` pooled signal links.
fn distances(scheme: Scheme, min_samples: usize) -> DistanceCdfs {
    let mut config = desk(scheme);
    loop {
        let d = estimate_distance_cdfs(&config).unwrap();
        if d.signal().len() >= min_samples {
            return d;
        }
        config.drops *= 2;
    }
}

fn distance_fidelity(cf: &DistanceCdfs, fd: &DistanceCdfs, elapsed: Duration) -> Outcome {
    let mut pass = elapsed < Duration::from_secs(120);
    let mut parts = Vec::new();
    for (d, lambda) in [(cf, LAMBDA_C), (fd, LAMBDA_F)] {
        let s = d.signal();
        let ks = s.ks_against(|r| distance_cdf(r, lambda));
        pass &= ks < 0.03 && s.len() >= 100_000;
        parts.push(format!(
            "{} KS={ks:.4} n={}",
            d.ul_signal.scheme.as_str(),
            s.len()
        ));
    }
    parts.push(format!("time={:.1}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join(", "))
}

fn dominates(upper: &EmpiricalCdf, lower: &EmpiricalCdf) -> (bool, f64) {
    let r_max = upper.max().unwrap_or(0.0).max(lower.max().unwrap_or(0.0));
    let worst = radius_grid(r_max, 100)
        .into_iter()
        .map(|r| upper.eval(r) - lower.eval(r))
        .fold(f64::INFINITY, f64::min);
    (worst >= 0.0, worst)
}

fn distance_orderings(cf: &DistanceCdfs, fd: &DistanceCdfs) -> Outcome {
    let (a, margin_a) = dominates(&cf.signal(), &fd.signal());
    let (b, margin_b) = dominates(&fd.intra_cell, &cf.intra_cell);
    let mut c = true;
    let mut parts = vec![
        format!("signal min(F_cf - F_fd)={margin_a:.4}"),
        format!("intra min(F_fd - F_cf)={margin_b:.4}"),
    ];
    for d in [cf, fd] {
        let ks = d.ul_signal.ks_two_sample(&d.dl_signal);
        let crit = ks_two_sample_critical(0.01, d.ul_signal.len(), d.dl_signal.len());
        c &= ks < crit;
        parts.push(format!(
            "{} UL/DL KS={ks:.4} (crit {crit:.4})",
            d.ul_signal.scheme.as_str()
        ));
    }
    outcome(a && b && c, parts.join(", "))
}

fn max_gap(a: &SuccessCurve, b: &SuccessCurve) -> (f64, f64) {
    a.points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| (p.beta_db, (p.p_success - q.p_success).abs()))
        .fold((0.0, 0.0), |best, x| if x.1 > best.1 { x } else { best })
}

fn ul_approximation(mc: &SuccessCurve, an: &SuccessCurve) -> Outcome {
    let (beta, gap) = max_gap(mc, an);
    outcome(
        gap < 0.05,
        format!("max |analytic - MC| = {gap:.4} at {beta} dB"),
    )
}

fn dl_lower_bound(mc: &SuccessCurve, an: &SuccessCurve) -> Outcome {
    let worst = mc
        .points
        .iter()
        .zip(&an.points)
        .map(|(m, a)| (m.beta_db, a.p_success - m.p_success - m.half_width()))
        .fold((0.0, f64::NEG_INFINITY), |best, x| {
            if x.1 > best.1 {
                x
            } else {
                best
            }
        });
    outcome(
        worst.1 <= 0.0,
        format!(
            "max (analytic - MC - hw) = {:.4} at {} dB",
            worst.1, worst.0
        ),
    )
}

fn scheme_gap(cf: &SuccessCurve, fd: &SuccessCurve) -> Outcome {
    let mut ordered = true;
    let mut in_band = true;
    let mut gaps = Vec::new();
    for (c, f) in cf.points.iter().zip(&fd.points) {
        ordered &= c.p_success > f.p_success;
        if (-10.0..=10.0).contains(&c.beta_db) {
            let rel = (c.p_success - f.p_success) / f.p_success;
            in_band &= (0.15..=0.45).contains(&rel);
            gaps.push(format!("{}dB:{:.0}%", c.beta_db, 100.0 * rel));
        }
    }
    outcome(
        ordered && in_band,
        format!("ordered={ordered}, relative gaps [{}]", gaps.join(" ")),
    )
}

fn kernel_oracle() -> Outcome {
    let start = Instant::now();
    let quad = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_subdivisions: 2000,
    };
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for i in 0..10 {
        let a = 10f64.powf(-3.0 + 6.0 * i as f64 / 9.0);
        for j in 0..10 {
            let lower = if j == 0 {
                0.0
            } else {
                10f64.powf(-2.0 + 4.0 * (j - 1) as f64 / 8.0)
            };
            let closed = kernel_closed_form_alpha4(a, 1.0, lower);
            match interference_kernel_integral(a, 1.0, lower, 4.0, &quad) {
                Ok(q) => worst = worst.max(((q - closed) / closed).abs()),
                Err(_) => ok = false,
            }
        }
    }
    let anchor = kernel_closed_form_alpha4(1.0, 1.0, 0.0);
    let anchor_q = interference_kernel_integral(1.0, 1.0, 0.0, 4.0, &quad).unwrap();
    let elapsed = start.elapsed();
    let pass = ok
        && worst < 1e-8
        && (anchor - PI / 4.0).abs() < 1e-15
        && ((anchor_q - PI / 4.0) / (PI / 4.0)).abs() < 1e-8
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "max rel diff {worst:.2e} over 100 points, K(1,0)={anchor_q:.12}, time={:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn structural(curves: &[SuccessCurve]) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for c in curves {
        let bounded = c.points.iter().all(|p| (0.0..=1.0).contains(&p.p_success));
        if !(c.is_non_increasing() && bounded) {
            pass = false;
            notes.push(format!(
                "{}/{}/{} shape",
                c.scheme.as_str(),
                c.direction,
                c.source
            ));
        }
    }

    let quiet = ChannelParams::reference().with_noise(0.0);
    let an = analytic_params(&quiet);
    let quad = QuadratureSpec::default();
    let mut limits = Vec::new();
    for scheme in [Scheme::CompFlex, Scheme::FullDuplex] {
        let mut mc = desk(scheme);
        mc.params = quiet;
        mc.drops = 200;
        mc.thresholds_db = vec![-100.0, 100.0];
        for dir in [Direction::Uplink, Direction::Downlink] {
            limits.push(estimate_success(&mc, dir).unwrap());
            limits.push(analytic_curve(scheme, dir, &an, &[-100.0, 100.0], &quad).unwrap());
        }
    }
    for c in &limits {
        let (lo, hi) = (c.points[0].p_success, c.points[1].p_success);
        if !(lo > 0.999 && hi < 0.001) {
            pass = false;
            notes.push(format!(
                "{}/{}/{} limits {lo:.4}/{hi:.4}",
                c.scheme.as_str(),
                c.direction,
                c.source
            ));
        }
    }
    let detail = if notes.is_empty() {
        format!(
            "{} curves monotone in [0,1], {} limit checks at -/+100 dB",
            curves.len(),
            limits.len()
        )
    } else {
        notes.join("; ")
    };
    outcome(pass, detail)
}

fn pairing_correctness() -> Outcome {
    let window = Window::new(DESK_WINDOW_KM).unwrap();
    let mut violations = 0;
    let (mut ul, mut total) = (0usize, 0usize);
    let (mut first_ul, mut pairs) = (0usize, 0usize);
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = sample_ppp(LAMBDA_C, window, &mut rng).unwrap();
        let adj = voronoi_adjacency(&d).unwrap();
        let net = assign_directions(pair_base_stations(&adj, &mut rng), &mut rng).unwrap();
        if net.validate(&adj).is_err() {
            violations += 1;
        }
        ul += net.count(Direction::Uplink);
        total += net.bs_count();
        pairs += net.pairs().len();
        first_ul += net
            .pairs()
            .iter()
            .filter(|&&(a, _)| net.direction(a) == Some(Direction::Uplink))
            .count();
    }
    let frac = ul as f64 / total as f64;
    let sigma = (0.25 / total as f64).sqrt();
    let coin = first_ul as f64 / pairs as f64;
    let coin_sigma = (0.25 / pairs as f64).sqrt();
    let pass = violations == 0
        && (frac - 0.5).abs() <= 3.0 * sigma
        && (coin - 0.5).abs() <= 3.0 * coin_sigma;
    outcome(
        pass,
        format!(
            "200 seeds, {violations} violations, UL fraction {frac:.4} (3σ={:.4}), pair coin {coin:.4} (3σ={:.4})",
            3.0 * sigma,
            3.0 * coin_sigma
        ),
    )
}

fn reproducibility() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let base = RunConfig {
        window_km: DESK_WINDOW_KM,
        drops: 200,
        seed: SEED,
        ..Default::default()
    };
    let mut identical = true;
    for dir in [&a, &b] {
        let cfg = RunConfig {
            out_dir: dir.path().to_path_buf(),
            ..base.clone()
        };
        run(&cfg).unwrap();
    }
    let mut files: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().ends_with(".csv"))
        .collect();
    files.sort();
    for f in &files {
        identical &=
            std::fs::read(a.path().join(f)).unwrap() == std::fs::read(b.path().join(f)).unwrap();
    }

    let mut small = desk(Scheme::CompFlex);
    small.drops = 500;
    let mut large = small.clone();
    large.drops = 2000;
    let mut ratios = Vec::new();
    for dir in [Direction::Uplink, Direction::Downlink] {
        let s = estimate_success(&small, dir).unwrap();
        let l = estimate_success(&large, dir).unwrap();
        for (p, q) in s.points.iter().zip(&l.points) {
            ratios.push(p.half_width() / q.half_width());
        }
    }
    let scaling = ratios.iter().all(|r| (1.6..=2.4).contains(r));
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| {
        (lo.min(r), hi.max(r))
    });
    outcome(
        identical && scaling && !files.is_empty(),
        format!(
            "{} CSV files identical={identical}, half-width ratio drops x4 in [{lo:.3}, {hi:.3}]",
            files.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    let start = Instant::now();
    let cf = distances(Scheme::CompFlex, 100_000);
    let fd = distances(Scheme::FullDuplex, 100_000);
    let elapsed = start.elapsed();
    results.push((
        "1 distance CDF fidelity",
        distance_fidelity(&cf, &fd, elapsed),
    ));
    results.push(("2 distance orderings", distance_orderings(&cf, &fd)));

    let reference = ChannelParams::reference();
    let an = analytic_params(&reference);
    let quad = QuadratureSpec::default();
    let mut curves = Vec::new();
    for scheme in [Scheme::CompFlex, Scheme::FullDuplex] {
        let mc = desk(scheme);
        for dir in [Direction::Uplink, Direction::Downlink] {
            curves.push(estimate_success(&mc, dir).unwrap());
            curves.push(analytic_curve(scheme, dir, &an, &mc.thresholds_db, &quad).unwrap());
        }
    }
    // Order: cf ul mc, cf ul an, cf dl mc, cf dl an, fd ul mc, fd ul an, fd dl mc, fd dl an.
    results.push((
        "3 uplink analytic vs MC",
        ul_approximation(&curves[0], &curves[1]),
    ));
    results.push((
        "4 downlink lower bound",
        dl_lower_bound(&curves[2], &curves[3]),
    ));
    results.push(("5 downlink scheme gap", scheme_gap(&curves[2], &curves[6])));
    results.push(("6 kernel oracle", kernel_oracle()));
    results.push(("7 structural properties", structural(&curves)));
    results.push(("8 pairing correctness", pairing_correctness()));
    results.push(("9 reproducibility", reproducibility()));

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    let strict = std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
