//! Path loss, Rayleigh fading and per-receiver SINR with the scheme-specific
//! cancellation rules.
//!
//! Uplink at a base station `b`:
//! * signal from the uplink mobile served by `b`, at the mobile power;
//! * base-station interference from every downlink transmitter except `b`
//!   itself (full-duplex self-interference is cancelled) and except the
//!   CoMPflex partner of `b` (cancelled over the interconnect);
//! * mobile interference from every other uplink mobile.
//!
//! Downlink at a mobile `m`:
//! * signal from the serving base station at the base-station power;
//! * base-station interference from every other downlink transmitter;
//! * mobile interference from every uplink mobile, including the same-cell
//!   one in full duplex.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::pairing::Direction;
use crate::scenario::Scenario;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// `r^(-alpha)` for a link of length `r` km.
pub fn pathloss(r: f64, alpha: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!(
            "path loss is singular for link length {r} km"
        )));
    }
    Ok(r.powf(-alpha))
}

/// Link and power parameters, powers in watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub alpha: f64,
    pub mu: f64,
    pub noise: f64,
    pub p_bs: f64,
    pub p_ms: f64,
}

impl ChannelParams {
    pub fn new(alpha: f64, mu: f64, noise: f64, p_bs: f64, p_ms: f64) -> Result<Self> {
        let params = Self {
            alpha,
            mu,
            noise,
            p_bs,
            p_ms,
        };
        params.validate()?;
        Ok(params)
    }

    /// Reference setting: alpha 4, unit-mean fading, noise -174 dBm,
    /// base stations at 40 dBm and mobiles at 20 dBm.
    pub fn reference() -> Self {
        Self {
            alpha: 4.0,
            mu: 1.0,
            noise: dbm_to_watts(-174.0),
            p_bs: dbm_to_watts(40.0),
            p_ms: dbm_to_watts(20.0),
        }
    }

    pub fn with_noise(self, noise: f64) -> Self {
        Self { noise, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return Err(Error::Parameter(format!(
                "path-loss exponent must exceed 2, got {}",
                self.alpha
            )));
        }
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::Parameter(format!(
                "fading rate must be positive, got {}",
                self.mu
            )));
        }
        for (name, v) in [
            ("noise", self.noise),
            ("p_bs", self.p_bs),
            ("p_ms", self.p_ms),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Exponential power gain with rate `mu` (mean `1/mu`).
pub fn sample_fading<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(Error::Parameter(format!(
            "fading rate must be positive, got {mu}"
        )));
    }
    let exp = Exp::new(mu).map_err(|e| Error::Parameter(format!("fading rate {mu}: {e}")))?;
    Ok(exp.sample(rng))
}

/// Source of per-link power gains.
pub trait FadingSource {
    fn gain(&mut self) -> f64;
}

/// Independent Rayleigh (exponential power) gains drawn from an RNG.
pub struct RayleighFading<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    exp: Exp<f64>,
}

impl<'a, R: Rng + ?Sized> RayleighFading<'a, R> {
    pub fn new(mu: f64, rng: &'a mut R) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::Parameter(format!(
                "fading rate must be positive, got {mu}"
            )));
        }
        let exp = Exp::new(mu).map_err(|e| Error::Parameter(format!("fading rate {mu}: {e}")))?;
        Ok(Self { rng, exp })
    }
}

impl<R: Rng + ?Sized> FadingSource for RayleighFading<'_, R> {
    fn gain(&mut self) -> f64 {
        self.exp.sample(self.rng)
    }
}

/// Deterministic unit gains, for path-loss-only evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitGain;

impl FadingSource for UnitGain {
    fn gain(&mut self) -> f64 {
        1.0
    }
}

/// Components of one SINR evaluation, with the interferer sets that produced
/// them (base-station indices and mobile indices).
#[derive(Debug, Clone, PartialEq)]
pub struct SinrBreakdown {
    pub signal: f64,
    pub i_bs: f64,
    pub i_ms: f64,
    pub noise: f64,
    pub sinr: f64,
    pub bs_interferers: Vec<usize>,
    pub ms_interferers: Vec<usize>,
}

impl SinrBreakdown {
    pub fn sinr_db(&self) -> f64 {
        linear_to_db(self.sinr)
    }
}

fn received<F: FadingSource + ?Sized>(
    from: &Point2D,
    to: &Point2D,
    power: f64,
    alpha: f64,
    fading: &mut F,
) -> Result<f64> {
    let g = fading.gain();
    Ok(g * pathloss(from.distance(to), alpha)? * power)
}

fn finish(
    signal: f64,
    i_bs: f64,
    i_ms: f64,
    noise: f64,
    bs_interferers: Vec<usize>,
    ms_interferers: Vec<usize>,
) -> SinrBreakdown {
    let denom = i_bs + i_ms + noise;
    let sinr = if denom > 0.0 {
        signal / denom
    } else if signal > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    SinrBreakdown {
        signal,
        i_bs,
        i_ms,
        noise,
        sinr,
        bs_interferers,
        ms_interferers,
    }
}

/// Uplink SINR at base station `bs` for the mobile it serves.
pub fn uplink_sinr<F: FadingSource + ?Sized>(
    scenario: &Scenario,
    bs: usize,
    params: &ChannelParams,
    fading: &mut F,
) -> Result<SinrBreakdown> {
    if bs >= scenario.bs_count() {
        return Err(Error::Parameter(format!("no base station {bs}")));
    }
    if !scenario.role(bs).receives_uplink() {
        return Err(Error::Contract(format!(
            "base station {bs} does not receive uplink"
        )));
    }
    let served = scenario
        .uplink_mobile_of(bs)
        .ok_or_else(|| Error::Contract(format!("base station {bs} serves no uplink mobile")))?;
    let sites = scenario.bs_positions();
    let rx = sites[bs];
    let mobiles = scenario.mobiles();

    let signal = received(
        &mobiles[served].position,
        &rx,
        params.p_ms,
        params.alpha,
        fading,
    )?;

    let cancelled = scenario.partner(bs);
    let mut i_bs = 0.0;
    let mut bs_interferers = Vec::new();
    for (j, role) in scenario.roles().iter().enumerate() {
        if j == bs || Some(j) == cancelled || !role.transmits_downlink() {
            continue;
        }
        i_bs += received(&sites[j], &rx, params.p_bs, params.alpha, fading)?;
        bs_interferers.push(j);
    }

    let mut i_ms = 0.0;
    let mut ms_interferers = Vec::new();
    for (k, ms) in mobiles.iter().enumerate() {
        if k == served || ms.direction != Direction::Uplink {
            continue;
        }
        i_ms += received(&ms.position, &rx, params.p_ms, params.alpha, fading)?;
        ms_interferers.push(k);
    }

    Ok(finish(
        signal,
        i_bs,
        i_ms,
        params.noise,
        bs_interferers,
        ms_interferers,
    ))
}

/// Downlink SINR at mobile `ms`.
pub fn downlink_sinr<F: FadingSource + ?Sized>(
    scenario: &Scenario,
    ms: usize,
    params: &ChannelParams,
    fading: &mut F,
) -> Result<SinrBreakdown> {
    let mobiles = scenario.mobiles();
    let target = mobiles
        .get(ms)
        .ok_or_else(|| Error::Parameter(format!("no mobile {ms}")))?;
    if target.direction != Direction::Downlink {
        return Err(Error::Contract(format!(
            "mobile {ms} is not a downlink mobile"
        )));
    }
    let sites = scenario.bs_positions();
    let rx = target.position;
    let serving = target.serving_bs;

    let signal = received(&sites[serving], &rx, params.p_bs, params.alpha, fading)?;

    let mut i_bs = 0.0;
    let mut bs_interferers = Vec::new();
    for (j, role) in scenario.roles().iter().enumerate() {
        if j == serving || !role.transmits_downlink() {
            continue;
        }
        i_bs += received(&sites[j], &rx, params.p_bs, params.alpha, fading)?;
        bs_interferers.push(j);
    }

    let mut i_ms = 0.0;
    let mut ms_interferers = Vec::new();
    for (k, other) in mobiles.iter().enumerate() {
        if other.direction != Direction::Uplink {
            continue;
        }
        i_ms += received(&other.position, &rx, params.p_ms, params.alpha, fading)?;
        ms_interferers.push(k);
    }

    Ok(finish(
        signal,
        i_bs,
        i_ms,
        params.noise,
        bs_interferers,
        ms_interferers,
    ))
}
