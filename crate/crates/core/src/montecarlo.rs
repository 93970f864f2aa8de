//! Drop-based estimation of success probabilities and link-distance
//! distributions.
//!
//! Each drop is an independent snapshot generated from its own ChaCha stream
//! `(seed, drop_index)`, so drops can run in any order or in parallel and
//! still merge to identical results. Statistics come only from receivers
//! inside the guard-trimmed interior window.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::distance_cdf;
use crate::channel::{db_to_linear, downlink_sinr, uplink_sinr, ChannelParams, RayleighFading};
use crate::error::{Error, Result};
use crate::geometry::Window;
use crate::pairing::Direction;
use crate::results::{CurveSource, EmpiricalCdf, LinkType, SuccessCurve, SuccessPoint};
use crate::scenario::{build_scenario, Scenario, Scheme};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;
pub const DEFAULT_GUARD_FRACTION: f64 = 0.2;

/// Independent random stream for one drop.
pub fn drop_rng(seed: u64, drop_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(drop_index);
    rng
}

/// Threshold grid from `min_db` to `max_db` inclusive.
pub fn threshold_grid(min_db: f64, max_db: f64, step_db: f64) -> Vec<f64> {
    let n = ((max_db - min_db) / step_db).round() as i64;
    (0..=n).map(|k| min_db + step_db * k as f64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub drops: usize,
    pub guard_fraction: f64,
    pub thresholds_db: Vec<f64>,
    pub seed: u64,
    pub scheme: Scheme,
    pub params: ChannelParams,
    /// Base-station density of `scheme`.
    pub lambda: f64,
    pub window: Window,
    /// Collect statistics from the typical receiver only.
    pub typical_only: bool,
}

impl McConfig {
    pub fn new(scheme: Scheme, lambda: f64, window: Window, params: ChannelParams) -> Self {
        Self {
            drops: 2000,
            guard_fraction: DEFAULT_GUARD_FRACTION,
            thresholds_db: threshold_grid(-20.0, 20.0, 5.0),
            seed: 1,
            scheme,
            params,
            lambda,
            window,
            typical_only: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.drops == 0 {
            return Err(Error::Parameter("drops must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.guard_fraction) {
            return Err(Error::Parameter(format!(
                "guard fraction must lie in [0, 1), got {}",
                self.guard_fraction
            )));
        }
        if self.thresholds_db.iter().any(|b| !b.is_finite()) {
            return Err(Error::Parameter("thresholds must be finite".into()));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Parameter(format!(
                "density must be positive, got {}",
                self.lambda
            )));
        }
        self.params.validate()
    }

    fn interior(&self) -> Result<Window> {
        self.window.interior(self.guard_fraction)
    }

    fn scenario(&self, rng: &mut ChaCha8Rng) -> Result<Scenario> {
        build_scenario(self.scheme, self.lambda, self.window, rng)
    }
}

/// Receivers of `direction` whose statistics count in this drop: base-station
/// indices for uplink, mobile indices for downlink.
fn eligible_receivers(
    scenario: &Scenario,
    direction: Direction,
    interior: &Window,
    typical_only: bool,
) -> Vec<usize> {
    if typical_only {
        return scenario
            .typical()
            .map(|t| match direction {
                Direction::Uplink => t.ul_bs,
                Direction::Downlink => t.dl_ms,
            })
            .into_iter()
            .collect();
    }
    match direction {
        Direction::Uplink => scenario
            .roles()
            .iter()
            .enumerate()
            .filter(|&(bs, role)| {
                role.receives_uplink() && interior.contains(&scenario.bs_positions()[bs])
            })
            .map(|(bs, _)| bs)
            .collect(),
        Direction::Downlink => scenario
            .mobiles()
            .iter()
            .enumerate()
            .filter(|(_, ms)| {
                ms.direction == Direction::Downlink && interior.contains(&ms.position)
            })
            .map(|(k, _)| k)
            .collect(),
    }
}

/// Per-drop fraction of eligible receivers meeting each threshold, or `None`
/// when the drop has no eligible receiver.
fn drop_success(
    config: &McConfig,
    direction: Direction,
    interior: &Window,
    thresholds: &[f64],
    drop_index: u64,
) -> Result<Option<Vec<f64>>> {
    let mut rng = drop_rng(config.seed, drop_index);
    let scenario = config.scenario(&mut rng)?;
    let receivers = eligible_receivers(&scenario, direction, interior, config.typical_only);
    if receivers.is_empty() {
        return Ok(None);
    }
    let mut fading = RayleighFading::new(config.params.mu, &mut rng)?;
    let mut hits = vec![0usize; thresholds.len()];
    for &rx in &receivers {
        let sinr = match direction {
            Direction::Uplink => uplink_sinr(&scenario, rx, &config.params, &mut fading)?,
            Direction::Downlink => downlink_sinr(&scenario, rx, &config.params, &mut fading)?,
        }
        .sinr;
        for (h, &beta) in hits.iter_mut().zip(thresholds) {
            if sinr >= beta {
                *h += 1;
            }
        }
    }
    let n = receivers.len() as f64;
    Ok(Some(hits.into_iter().map(|h| h as f64 / n).collect()))
}

/// Estimates `P{SINR >= β}` for every threshold, averaging per-drop means
/// and attaching a 95% normal-approximation interval over drops.
pub fn estimate_success(config: &McConfig, direction: Direction) -> Result<SuccessCurve> {
    config.validate()?;
    let interior = config.interior()?;
    let thresholds: Vec<f64> = config
        .thresholds_db
        .iter()
        .map(|&db| db_to_linear(db))
        .collect();

    let per_drop = (0..config.drops as u64)
        .into_par_iter()
        .map(|d| drop_success(config, direction, &interior, &thresholds, d))
        .collect::<Result<Vec<_>>>()?;

    let used: Vec<Vec<f64>> = per_drop.iter().flatten().cloned().collect();
    let skipped = per_drop.len() - used.len();
    let n = used.len();
    if n == 0 {
        return Err(Error::Parameter(format!(
            "none of the {} drops had an eligible receiver in the interior",
            config.drops
        )));
    }
    let points = config
        .thresholds_db
        .iter()
        .enumerate()
        .map(|(k, &beta_db)| {
            let mean = used.iter().map(|d| d[k]).sum::<f64>() / n as f64;
            let half = if n > 1 {
                let var = used.iter().map(|d| (d[k] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                Z_95 * (var / n as f64).sqrt()
            } else {
                0.0
            };
            SuccessPoint {
                beta_db,
                p_success: mean,
                ci_low: (mean - half).max(0.0),
                ci_high: (mean + half).min(1.0),
            }
        })
        .collect();

    Ok(SuccessCurve {
        scheme: config.scheme,
        direction,
        source: CurveSource::MonteCarlo,
        points,
        drops: n,
        skipped_drops: skipped,
        seed: config.seed,
    })
}

/// Distance samples from every drop, split by link type.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCdfs {
    pub ul_signal: EmpiricalCdf,
    pub dl_signal: EmpiricalCdf,
    pub intra_cell: EmpiricalCdf,
    pub skipped_drops: usize,
}

impl DistanceCdfs {
    pub fn all(&self) -> [&EmpiricalCdf; 3] {
        [&self.ul_signal, &self.dl_signal, &self.intra_cell]
    }

    /// Uplink and downlink signal distances pooled.
    pub fn signal(&self) -> EmpiricalCdf {
        let mut samples = self.ul_signal.samples().to_vec();
        samples.extend_from_slice(self.dl_signal.samples());
        EmpiricalCdf::new(self.ul_signal.scheme, LinkType::UlSignal, samples)
    }
}

#[derive(Default)]
struct DropDistances {
    ul: Vec<f64>,
    dl: Vec<f64>,
    intra: Vec<f64>,
}

fn drop_distances(config: &McConfig, interior: &Window, drop_index: u64) -> Result<DropDistances> {
    let mut rng = drop_rng(config.seed, drop_index);
    let scenario = config.scenario(&mut rng)?;
    let sites = scenario.bs_positions();
    let mobiles = scenario.mobiles();
    let mut out = DropDistances::default();
    for (bs, site) in sites.iter().enumerate() {
        if !interior.contains(site) {
            continue;
        }
        if let Some(ul) = scenario.uplink_mobile_of(bs) {
            out.ul.push(mobiles[ul].position.distance(site));
        }
        if let Some(dl) = scenario.downlink_mobile_of(bs) {
            out.dl.push(mobiles[dl].position.distance(site));
            if let Some(ul) = scenario.intra_cell_interferer(dl) {
                out.intra
                    .push(mobiles[ul].position.distance(&mobiles[dl].position));
            }
        }
    }
    Ok(out)
}

/// Collects uplink signal, downlink signal and intra-cell interference
/// distances from cells whose base station lies in the interior.
pub fn estimate_distance_cdfs(config: &McConfig) -> Result<DistanceCdfs> {
    config.validate()?;
    let interior = config.interior()?;
    let per_drop = (0..config.drops as u64)
        .into_par_iter()
        .map(|d| drop_distances(config, &interior, d))
        .collect::<Result<Vec<_>>>()?;
    let skipped = per_drop
        .iter()
        .filter(|d| d.ul.is_empty() && d.dl.is_empty())
        .count();
    let mut all = DropDistances::default();
    for d in per_drop {
        all.ul.extend(d.ul);
        all.dl.extend(d.dl);
        all.intra.extend(d.intra);
    }
    Ok(DistanceCdfs {
        ul_signal: EmpiricalCdf::new(config.scheme, LinkType::UlSignal, all.ul),
        dl_signal: EmpiricalCdf::new(config.scheme, LinkType::DlSignal, all.dl),
        intra_cell: EmpiricalCdf::new(config.scheme, LinkType::IntraCellInterference, all.intra),
        skipped_drops: skipped,
    })
}

/// KS distance between the pooled signal-distance sample and the
/// nearest-neighbour CDF at the configured density.
pub fn empirical_vs_analytic_distance(config: &McConfig) -> Result<f64> {
    let cdfs = estimate_distance_cdfs(config)?;
    let lambda = config.lambda;
    Ok(cdfs.signal().ks_against(|r| distance_cdf(r, lambda)))
}
