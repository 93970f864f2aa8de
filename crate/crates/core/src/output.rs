//! CSV rendering for curves, distance CDFs and snapshot dumps.
//!
//! Floats are written with nine significant digits so reruns compare
//! byte for byte.

use std::fmt::Write as _;

use crate::geometry::Point2D;
use crate::pairing::PairedNetwork;
use crate::results::{EmpiricalCdf, SuccessCurve};
use crate::scenario::{BsRole, Scenario, Scheme};

pub const SUCCESS_HEADER: &str =
    "scheme,direction,beta_db,p_success,ci_low,ci_high,source,drops,seed";
pub const DISTANCE_HEADER: &str = "scheme,link_type,r_km,cdf";

/// Shortest decimal with at most nine significant digits, `%.9g` style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.8e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    }
}

pub fn success_csv(curves: &[SuccessCurve]) -> String {
    let mut out = String::from(SUCCESS_HEADER);
    out.push('\n');
    for c in curves {
        for p in &c.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.scheme.as_str(),
                c.direction.as_str(),
                fmt_sig(p.beta_db),
                fmt_sig(p.p_success),
                fmt_sig(p.ci_low),
                fmt_sig(p.ci_high),
                c.source,
                c.drops,
                c.seed
            );
        }
    }
    out
}

/// One row of the distance-CDF file. `link_type` is free text so analytic
/// reference rows can share the file with empirical ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfRow {
    pub scheme: Scheme,
    pub link_type: String,
    pub r_km: f64,
    pub cdf: f64,
}

/// Samples an empirical CDF onto the given radii.
pub fn empirical_rows(cdf: &EmpiricalCdf, radii: &[f64]) -> Vec<CdfRow> {
    radii
        .iter()
        .map(|&r| CdfRow {
            scheme: cdf.scheme,
            link_type: cdf.link_type.as_str().into(),
            r_km: r,
            cdf: cdf.eval(r),
        })
        .collect()
}

pub fn distance_csv(rows: &[CdfRow]) -> String {
    let mut out = String::from(DISTANCE_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.scheme.as_str(),
            r.link_type,
            fmt_sig(r.r_km),
            fmt_sig(r.cdf)
        );
    }
    out
}

pub fn deployment_csv(points: &[Point2D]) -> String {
    let mut out = String::from("id,x_km,y_km\n");
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", fmt_sig(p.x), fmt_sig(p.y));
    }
    out
}

/// `bs_id,partner_id,direction`; unpaired stations get partner `-1`, and
/// direction is empty until assigned.
pub fn pairing_csv(network: &PairedNetwork) -> String {
    let mut out = String::from("bs_id,partner_id,direction\n");
    for bs in 0..network.bs_count() {
        let partner = network
            .partner(bs)
            .map_or_else(|| "-1".to_string(), |p| p.to_string());
        let dir = network.direction(bs).map_or("", |d| d.as_str());
        let _ = writeln!(out, "{bs},{partner},{dir}");
    }
    out
}

/// `kind,id,x_km,y_km,direction,serving_bs` for base stations then mobiles.
/// Full-duplex base stations have direction `fd` and no serving station.
pub fn scenario_csv(scenario: &Scenario) -> String {
    let mut out = String::from("kind,id,x_km,y_km,direction,serving_bs\n");
    for (i, (p, role)) in scenario
        .bs_positions()
        .iter()
        .zip(scenario.roles())
        .enumerate()
    {
        let dir = match role {
            BsRole::Uplink => "ul",
            BsRole::Downlink => "dl",
            BsRole::FullDuplex => "fd",
        };
        let _ = writeln!(out, "bs,{i},{},{},{dir},", fmt_sig(p.x), fmt_sig(p.y));
    }
    for (i, m) in scenario.mobiles().iter().enumerate() {
        let _ = writeln!(
            out,
            "ms,{i},{},{},{},{}",
            fmt_sig(m.position.x),
            fmt_sig(m.position.y),
            m.direction.as_str(),
            m.serving_bs
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-20.0), "-20");
        assert_eq!(fmt_sig(0.123456789123), "0.123456789");
        assert_eq!(fmt_sig(123456.789123), "123456.789");
        assert_eq!(fmt_sig(3.981071705534972e-21), "3.98107171e-21");
        assert_eq!(fmt_sig(1.5e12), "1.5e12");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(-1e-12), "-1e-12");
    }

    #[test]
    fn parsed_values_round_to_nine_digits() {
        for &x in &[0.987654321987, 1e-7 * 3.3333333333, 42.000000001, 0.5] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-8, "{x} -> {back}");
        }
    }
}
