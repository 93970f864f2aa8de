//! Numerical evaluation of the closed-form success probabilities under the
//! independent-PPP approximation.
//!
//! Every expression has the shape
//!
//! ```text
//! P = ∫₀^∞ 2πλ r exp(-πλr² - sσ²) L_bs(r) L_ms(r) dr,   s = μβ rᵅ / P_tx
//! ```
//!
//! where each Laplace transform is built from the shared kernel
//!
//! ```text
//! K(c, r, lower) = ∫_lower^∞ c (r/x)ᵅ / (1 + c (r/x)ᵅ) x dx.
//! ```
//!
//! With `a = c rᵅ` and `x = a^(1/α) y` the kernel becomes
//! `a^(2/α) ∫_{lower/a^(1/α)}^∞ y / (1 + yᵅ) dy`, which is what gets
//! integrated numerically. For α = 4 it has the closed form
//! `(√a / 2) · atan2(√a, lower²)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::channel::{db_to_linear, ChannelParams};
use crate::error::{Error, NumericError, Result};
use crate::pairing::Direction;
use crate::quadrature::{integrate_to_infinity, QuadratureSpec};
use crate::results::{CurveSource, SuccessCurve, SuccessPoint};
use crate::scenario::Scheme;

/// How the inner kernel integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    Quadrature,
    /// Use the α = 4 closed form when α is exactly 4, quadrature otherwise.
    ClosedFormWhenAvailable,
}

/// Densities (per km²), path loss, fading and powers (W) for the analytic
/// expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams {
    pub lambda_c: f64,
    /// Density of CoMPflex uplink base stations (and uplink mobiles).
    pub lambda_cu: f64,
    /// Density of CoMPflex downlink base stations.
    pub lambda_cd: f64,
    pub lambda_f: f64,
    pub alpha: f64,
    pub mu: f64,
    pub p_b: f64,
    pub p_m: f64,
    pub sigma2: f64,
    pub kernel: KernelMethod,
}

impl AnalyticParams {
    /// Independent thinning: uplink and downlink densities are each half of `lambda_c`.
    pub fn new(lambda_c: f64, lambda_f: f64, channel: &ChannelParams) -> Result<Self> {
        let params = Self {
            lambda_c,
            lambda_cu: 0.5 * lambda_c,
            lambda_cd: 0.5 * lambda_c,
            lambda_f,
            alpha: channel.alpha,
            mu: channel.mu,
            p_b: channel.p_bs,
            p_m: channel.p_ms,
            sigma2: channel.noise,
            kernel: KernelMethod::ClosedFormWhenAvailable,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_kernel(self, kernel: KernelMethod) -> Self {
        Self { kernel, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_c", self.lambda_c),
            ("lambda_cu", self.lambda_cu),
            ("lambda_cd", self.lambda_cd),
            ("lambda_f", self.lambda_f),
            ("p_b", self.p_b),
            ("p_m", self.p_m),
            ("sigma2", self.sigma2),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Parameter(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
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
        Ok(())
    }
}

/// Nearest-neighbour distance CDF `1 - exp(-λπr²)`.
pub fn distance_cdf(r: f64, lambda: f64) -> f64 {
    if r <= 0.0 || lambda <= 0.0 {
        return 0.0;
    }
    -(-lambda * PI * r * r).exp_m1()
}

/// Inverse of [`distance_cdf`], for inverse-transform sampling.
pub fn distance_quantile(u: f64, lambda: f64) -> f64 {
    (-(-u).ln_1p() / (lambda * PI)).sqrt()
}

/// Closed-form α = 4 kernel: `(√a/2) · atan2(√a, lower²)` with `a = c r⁴`.
pub fn kernel_closed_form_alpha4(c: f64, r: f64, lower: f64) -> f64 {
    let sqrt_a = c.sqrt() * r * r;
    if sqrt_a == 0.0 {
        return 0.0;
    }
    0.5 * sqrt_a * sqrt_a.atan2(lower * lower)
}

/// `∫_lower^∞ c (r/x)ᵅ / (1 + c (r/x)ᵅ) x dx` by adaptive quadrature.
pub fn interference_kernel_integral(
    c: f64,
    r: f64,
    lower: f64,
    alpha: f64,
    quad: &QuadratureSpec,
) -> Result<f64, NumericError> {
    if alpha.is_nan() || alpha <= 2.0 {
        return Err(NumericError::Divergent(alpha));
    }
    if c == 0.0 || r == 0.0 {
        return Ok(0.0);
    }
    let length = c.powf(1.0 / alpha) * r;
    let y0 = lower / length;
    let integrand = |y: f64| -> Result<f64, NumericError> {
        Ok(if y > 1.0 {
            let inv = y.powf(-alpha);
            y * inv / (1.0 + inv)
        } else {
            y / (1.0 + y.powf(alpha))
        })
    };
    let tail = integrate_to_infinity(integrand, y0, y0.max(1.0), quad, "interference kernel")?;
    Ok(length * length * tail.value)
}

fn kernel(
    params: &AnalyticParams,
    c: f64,
    r: f64,
    lower: f64,
    quad: &QuadratureSpec,
) -> Result<f64, NumericError> {
    match params.kernel {
        KernelMethod::ClosedFormWhenAvailable if params.alpha == 4.0 => {
            Ok(kernel_closed_form_alpha4(c, r, lower))
        }
        _ => interference_kernel_integral(c, r, lower, params.alpha, quad),
    }
}

/// `2πλ ∫₀^∞ r exp(-πλr² - sσ²) L(r) dr` with `s = μβrᵅ/p_tx`.
fn outer_integral<L>(
    lambda: f64,
    beta: f64,
    p_tx: f64,
    params: &AnalyticParams,
    quad: &QuadratureSpec,
    mut transforms: L,
) -> Result<f64>
where
    L: FnMut(f64) -> Result<f64, NumericError>,
{
    check_beta(beta)?;
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::Parameter(format!(
            "serving density must be positive, got {lambda}"
        )));
    }
    if p_tx == 0.0 {
        return Ok(0.0);
    }
    let noise_rate = params.mu * beta * params.sigma2 / p_tx;
    let integrand = |r: f64| -> Result<f64, NumericError> {
        let exponent = -lambda * PI * r * r - noise_rate * r.powf(params.alpha);
        if exponent < -745.0 {
            return Ok(0.0);
        }
        Ok(2.0 * PI * lambda * r * exponent.exp() * transforms(r)?)
    };
    let scale = 1.0 / (PI * lambda).sqrt();
    let value = integrate_to_infinity(integrand, 0.0, scale, quad, "success probability")?.value;
    Ok(value.clamp(0.0, 1.0))
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::Parameter(format!(
            "SINR threshold must be finite and non-negative, got {beta}"
        )));
    }
    Ok(())
}

/// Transform `exp(-2πλ K(c, r, lower))`.
fn pgfl(
    params: &AnalyticParams,
    density: f64,
    c: f64,
    r: f64,
    lower: f64,
    quad: &QuadratureSpec,
) -> Result<f64, NumericError> {
    if density == 0.0 {
        return Ok(1.0);
    }
    Ok((-2.0 * PI * density * kernel(params, c, r, lower, quad)?).exp())
}

/// CoMPflex uplink success probability. The downlink-BS transform averages
/// over the distance `t` to the nearest interfering downlink base station
/// (taken as the cancelled partner) and integrates interference from `t`
/// outward; the mobile transform integrates from the link length `r`.
pub fn ul_success_compflex(
    params: &AnalyticParams,
    beta_u: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    params.validate()?;
    check_beta(beta_u)?;
    if params.p_m == 0.0 {
        return Ok(0.0);
    }
    let inner = quad.scaled(1e-2);
    let c_bs = beta_u * params.p_b / params.p_m;
    let lambda_d = params.lambda_cd;
    outer_integral(params.lambda_c, beta_u, params.p_m, params, quad, |r| {
        let l_ms = pgfl(params, params.lambda_cu, beta_u, r, r, &inner)?;
        if l_ms == 0.0 {
            return Ok(0.0);
        }
        let l_bs = if lambda_d == 0.0 || c_bs == 0.0 {
            1.0
        } else {
            let nearest = |t: f64| -> Result<f64, NumericError> {
                let k = kernel(params, c_bs, r, t, &inner.scaled(1e-1))?;
                let exponent = -PI * lambda_d * t * t - 2.0 * PI * lambda_d * k;
                Ok(2.0 * PI * lambda_d * t * exponent.exp())
            };
            let scale = 1.0 / (PI * lambda_d).sqrt();
            integrate_to_infinity(nearest, 0.0, scale, &inner, "downlink-BS transform")?.value
        };
        Ok(l_bs * l_ms)
    })
}

/// CoMPflex downlink success probability: base-station interference from the
/// link length outward, uplink-mobile interference from the origin (no
/// cancellation in the downlink).
pub fn dl_success_compflex(
    params: &AnalyticParams,
    beta_d: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    params.validate()?;
    check_beta(beta_d)?;
    if params.p_b == 0.0 {
        return Ok(0.0);
    }
    let inner = quad.scaled(1e-2);
    let c_ms = beta_d * params.p_m / params.p_b;
    outer_integral(params.lambda_c, beta_d, params.p_b, params, quad, |r| {
        let l_bs = pgfl(params, params.lambda_cd, beta_d, r, r, &inner)?;
        let l_ms = pgfl(params, params.lambda_cu, c_ms, r, 0.0, &inner)?;
        Ok(l_bs * l_ms)
    })
}

/// Full-duplex uplink success probability at density `lambda_f`; both
/// transforms integrate from the link length.
pub fn ul_success_fd(params: &AnalyticParams, beta_u: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    check_beta(beta_u)?;
    if params.p_m == 0.0 {
        return Ok(0.0);
    }
    let inner = quad.scaled(1e-2);
    let c_bs = beta_u * params.p_b / params.p_m;
    let lambda = params.lambda_f;
    outer_integral(lambda, beta_u, params.p_m, params, quad, |r| {
        let l_bs = pgfl(params, lambda, c_bs, r, r, &inner)?;
        let l_ms = pgfl(params, lambda, beta_u, r, r, &inner)?;
        Ok(l_bs * l_ms)
    })
}

/// Full-duplex downlink success probability, built by analogy with the
/// uplink expression: base stations from the link length, uplink mobiles
/// from the origin.
pub fn dl_success_fd(params: &AnalyticParams, beta_d: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    check_beta(beta_d)?;
    if params.p_b == 0.0 {
        return Ok(0.0);
    }
    let inner = quad.scaled(1e-2);
    let c_ms = beta_d * params.p_m / params.p_b;
    let lambda = params.lambda_f;
    outer_integral(lambda, beta_d, params.p_b, params, quad, |r| {
        let l_bs = pgfl(params, lambda, beta_d, r, r, &inner)?;
        let l_ms = pgfl(params, lambda, c_ms, r, 0.0, &inner)?;
        Ok(l_bs * l_ms)
    })
}

/// Success probability at linear threshold `beta`.
pub fn success_probability(
    scheme: Scheme,
    direction: Direction,
    params: &AnalyticParams,
    beta: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    match (scheme, direction) {
        (Scheme::CompFlex, Direction::Uplink) => ul_success_compflex(params, beta, quad),
        (Scheme::CompFlex, Direction::Downlink) => dl_success_compflex(params, beta, quad),
        (Scheme::FullDuplex, Direction::Uplink) => ul_success_fd(params, beta, quad),
        (Scheme::FullDuplex, Direction::Downlink) => dl_success_fd(params, beta, quad),
    }
}

pub fn curve_source(scheme: Scheme, direction: Direction) -> CurveSource {
    match (scheme, direction) {
        (Scheme::FullDuplex, Direction::Downlink) => CurveSource::AnalyticAnalog,
        _ => CurveSource::Analytic,
    }
}

/// Evaluates a whole curve over thresholds in dB (in parallel).
pub fn analytic_curve(
    scheme: Scheme,
    direction: Direction,
    params: &AnalyticParams,
    thresholds_db: &[f64],
    quad: &QuadratureSpec,
) -> Result<SuccessCurve> {
    let points = thresholds_db
        .par_iter()
        .map(|&db| {
            success_probability(scheme, direction, params, db_to_linear(db), quad)
                .map(|p| SuccessPoint::exact(db, p))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuccessCurve {
        scheme,
        direction,
        source: curve_source(scheme, direction),
        points,
        drops: 0,
        skipped_drops: 0,
        seed: 0,
    })
}
