use compflex::analytic::{
    interference_kernel_integral, kernel_closed_form_alpha4, success_probability, AnalyticParams,
};
use compflex::channel::{db_to_linear, ChannelParams};
use compflex::quadrature::QuadratureSpec;
use compflex::{Direction, Scheme};
use proptest::prelude::*;

const CASES: [(Scheme, Direction); 4] = [
    (Scheme::CompFlex, Direction::Uplink),
    (Scheme::CompFlex, Direction::Downlink),
    (Scheme::FullDuplex, Direction::Uplink),
    (Scheme::FullDuplex, Direction::Downlink),
];

fn params(channel: ChannelParams) -> AnalyticParams {
    AnalyticParams::new(0.02, 0.01, &channel).unwrap()
}

#[test]
fn vanishing_noise_approaches_the_interference_limited_value() {
    let q = QuadratureSpec::default();
    let quiet = params(ChannelParams::reference().with_noise(0.0));
    let beta = db_to_linear(5.0);
    for (scheme, dir) in CASES {
        let limit = success_probability(scheme, dir, &quiet, beta, &q).unwrap();
        let mut prev_gap = f64::INFINITY;
        for noise in [1e-6, 1e-8, 1e-10, 1e-14] {
            let p = params(ChannelParams::reference().with_noise(noise));
            let v = success_probability(scheme, dir, &p, beta, &q).unwrap();
            let gap = limit - v;
            assert!(gap >= -1e-9, "{scheme} {dir}: noise raised success");
            assert!(gap <= prev_gap + 1e-9);
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-6, "{scheme} {dir}: residual {prev_gap}");
    }
}

#[test]
fn fading_rate_only_enters_through_noise() {
    let q = QuadratureSpec::default();
    let base = ChannelParams::reference().with_noise(0.0);
    let a = params(base);
    let b = params(ChannelParams { mu: 3.0, ..base });
    for (scheme, dir) in CASES {
        for beta_db in [-10.0, 0.0, 10.0] {
            let beta = db_to_linear(beta_db);
            let pa = success_probability(scheme, dir, &a, beta, &q).unwrap();
            let pb = success_probability(scheme, dir, &b, beta, &q).unwrap();
            assert!((pa - pb).abs() < 1e-8);
        }
    }
    // With noise, a larger rate (weaker mean fading) lowers success.
    let noisy = ChannelParams::reference().with_noise(1e-6);
    let weak = params(ChannelParams { mu: 4.0, ..noisy });
    let strong = params(noisy);
    let beta = 1.0;
    for (scheme, dir) in CASES {
        let pw = success_probability(scheme, dir, &weak, beta, &q).unwrap();
        let ps = success_probability(scheme, dir, &strong, beta, &q).unwrap();
        assert!(pw < ps);
    }
}

#[test]
fn higher_mobile_power_helps_uplink_and_hurts_downlink() {
    let q = QuadratureSpec::default();
    let low = params(ChannelParams::reference());
    let high = params(ChannelParams {
        p_ms: 1.0,
        ..ChannelParams::reference()
    });
    let beta = 1.0;
    for scheme in [Scheme::CompFlex, Scheme::FullDuplex] {
        let ul_low = success_probability(scheme, Direction::Uplink, &low, beta, &q).unwrap();
        let ul_high = success_probability(scheme, Direction::Uplink, &high, beta, &q).unwrap();
        assert!(ul_high > ul_low);
        let dl_low = success_probability(scheme, Direction::Downlink, &low, beta, &q).unwrap();
        let dl_high = success_probability(scheme, Direction::Downlink, &high, beta, &q).unwrap();
        assert!(dl_high < dl_low);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn success_is_non_increasing_in_threshold(lo in -30.0f64..30.0, step in 0.1f64..10.0, k in 0usize..4) {
        let (scheme, dir) = CASES[k];
        let q = QuadratureSpec::default();
        let p = params(ChannelParams::reference());
        let a = success_probability(scheme, dir, &p, db_to_linear(lo), &q).unwrap();
        let b = success_probability(scheme, dir, &p, db_to_linear(lo + step), &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(b <= a + 1e-9);
    }

    #[test]
    fn kernel_closed_form_matches_quadrature(c in 1e-4f64..1e4, r in 0.01f64..30.0, lower in 0.0f64..50.0) {
        let quad = QuadratureSpec { rel_tol: 1e-12, abs_tol: 0.0, max_subdivisions: 2000 };
        let closed = kernel_closed_form_alpha4(c, r, lower);
        let numeric = interference_kernel_integral(c, r, lower, 4.0, &quad).unwrap();
        prop_assert!(((numeric - closed) / closed).abs() < 1e-8);
    }

    #[test]
    fn kernel_decreases_with_lower_limit(c in 1e-3f64..1e3, r in 0.1f64..10.0, lower in 0.0f64..20.0, alpha in 2.5f64..6.0) {
        let quad = QuadratureSpec::default();
        let near = interference_kernel_integral(c, r, lower, alpha, &quad).unwrap();
        let far = interference_kernel_integral(c, r, lower + 1.0, alpha, &quad).unwrap();
        prop_assert!(far <= near * (1.0 + 1e-9));
        prop_assert!(far >= 0.0);
    }
}
