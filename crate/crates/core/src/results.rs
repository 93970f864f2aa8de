//! Result containers shared by the Monte Carlo and analytic paths.

use std::fmt;

use crate::pairing::Direction;
use crate::scenario::Scheme;

/// Where a success curve came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    MonteCarlo,
    Analytic,
    /// Analytic expression built by analogy rather than taken verbatim
    /// (full-duplex downlink).
    AnalyticAnalog,
}

impl CurveSource {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveSource::MonteCarlo => "mc",
            CurveSource::Analytic => "analytic",
            CurveSource::AnalyticAnalog => "analytic_analog",
        }
    }
}

impl fmt::Display for CurveSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessPoint {
    pub beta_db: f64,
    pub p_success: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl SuccessPoint {
    pub fn exact(beta_db: f64, p: f64) -> Self {
        Self {
            beta_db,
            p_success: p,
            ci_low: p,
            ci_high: p,
        }
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// Success probability against SINR threshold for one scheme and direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCurve {
    pub scheme: Scheme,
    pub direction: Direction,
    pub source: CurveSource,
    pub points: Vec<SuccessPoint>,
    /// Drops that contributed (zero for analytic curves).
    pub drops: usize,
    /// Drops without any eligible receiver in the interior.
    pub skipped_drops: usize,
    pub seed: u64,
}

impl SuccessCurve {
    pub fn at(&self, beta_db: f64) -> Option<&SuccessPoint> {
        self.points.iter().find(|p| p.beta_db == beta_db)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[0].beta_db > w[1].beta_db || w[1].p_success <= w[0].p_success)
    }
}

/// Kind of distance collected for a CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkType {
    UlSignal,
    DlSignal,
    IntraCellInterference,
}

impl LinkType {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkType::UlSignal => "ul_signal",
            LinkType::DlSignal => "dl_signal",
            LinkType::IntraCellInterference => "intra_cell_interference",
        }
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Empirical distribution of link distances (km).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    pub scheme: Scheme,
    pub link_type: LinkType,
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(scheme: Scheme, link_type: LinkType, mut samples: Vec<f64>) -> Self {
        samples.retain(|x| x.is_finite());
        samples.sort_by(f64::total_cmp);
        Self {
            scheme,
            link_type,
            samples,
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.samples.last().copied()
    }

    /// Fraction of samples `<= r`.
    pub fn eval(&self, r: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.partition_point(|&x| x <= r) as f64 / self.samples.len() as f64
    }

    /// One-sample Kolmogorov–Smirnov statistic against a continuous CDF.
    pub fn ks_against(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.samples.len() as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                ((i + 1) as f64 / n - f).max(f - i as f64 / n)
            })
            .fold(0.0, f64::max)
    }

    /// Two-sample Kolmogorov–Smirnov statistic.
    pub fn ks_two_sample(&self, other: &EmpiricalCdf) -> f64 {
        let (a, b) = (&self.samples, &other.samples);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j) = (0, 0);
        let mut d: f64 = 0.0;
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        d
    }

    /// `(r, F(r))` on `points` evenly spaced radii from 0 to `r_max`.
    pub fn on_grid(&self, r_max: f64, points: usize) -> Vec<(f64, f64)> {
        radius_grid(r_max, points)
            .into_iter()
            .map(|r| (r, self.eval(r)))
            .collect()
    }
}

/// Evenly spaced radii `0, ..., r_max` (inclusive).
pub fn radius_grid(r_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|k| r_max * k as f64 / (points - 1) as f64)
            .collect(),
    }
}

/// Asymptotic two-sample KS rejection threshold at significance `alpha`.
pub fn ks_two_sample_critical(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    let (n, m) = (n as f64, m as f64);
    c * ((n + m) / (n * m)).sqrt()
}
