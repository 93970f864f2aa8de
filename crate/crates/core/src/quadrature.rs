//! Adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals and,
//! through the map `x = lower + scale * u / (1 - u)`, on `[lower, inf)`.

use crate::error::NumericError;

/// Tolerances for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 500,
        }
    }
}

impl QuadratureSpec {
    /// Same spec with the relative tolerance multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol * factor).max(1e-14),
            abs_tol: (self.abs_tol * factor).max(1e-300),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

// Kronrod abscissae (non-negative half) and weights for the 21-point rule;
// odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F>(
    f: &mut F,
    a: f64,
    b: f64,
    context: &'static str,
) -> Result<Segment, NumericError>
where
    F: FnMut(f64) -> Result<f64, NumericError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64, NumericError> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericError::NonFinite {
                context,
                at: x,
                value: y,
            })
        }
    };
    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for k in 0..10 {
        let dx = half * XGK[k];
        let pair = eval(center - dx)? + eval(center + dx)?;
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Ok(Segment { a, b, value, error })
}

/// Integrates a fallible integrand over the finite interval `[a, b]`.
pub fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    context: &'static str,
) -> Result<Integral, NumericError>
where
    F: FnMut(f64) -> Result<f64, NumericError>,
{
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
            subdivisions: 0,
        });
    }
    let mut segments = vec![gauss_kronrod(&mut f, a, b, context)?];
    let mut evaluations = 21;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let tolerance = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tolerance {
            return Ok(Integral {
                value,
                abs_error: error,
                evaluations,
                subdivisions: segments.len() - 1,
            });
        }
        let (worst, _) =
            segments
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bi, be), (i, s)| {
                    if s.error > be {
                        (i, s.error)
                    } else {
                        (bi, be)
                    }
                });
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        // Stop once the worst segment cannot be split in floating point.
        if segments.len() > spec.max_subdivisions || mid <= seg.a || mid >= seg.b {
            return Err(NumericError::NoConvergence {
                context,
                value,
                abs_error: error,
                tolerance,
                subdivisions: segments.len() - 1,
            });
        }
        let left = gauss_kronrod(&mut f, seg.a, mid, context)?;
        let right = gauss_kronrod(&mut f, mid, seg.b, context)?;
        evaluations += 42;
        segments[worst] = left;
        segments.push(right);
    }
}

/// Integrates over `[lower, inf)` after compactifying with
/// `x = lower + scale * u / (1 - u)`. `scale` should be the length over which
/// the integrand varies.
pub fn integrate_to_infinity<F>(
    mut f: F,
    lower: f64,
    scale: f64,
    spec: &QuadratureSpec,
    context: &'static str,
) -> Result<Integral, NumericError>
where
    F: FnMut(f64) -> Result<f64, NumericError>,
{
    let transformed = |u: f64| -> Result<f64, NumericError> {
        let w = 1.0 - u;
        let x = lower + scale * u / w;
        if !x.is_finite() {
            return Ok(0.0);
        }
        let y = f(x)?;
        if y == 0.0 {
            return Ok(0.0);
        }
        Ok(y * scale / (w * w))
    };
    integrate(transformed, 0.0, 1.0, spec, context)
}
