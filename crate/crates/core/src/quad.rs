//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 21-point Kronrod rule with its embedded 10-point Gauss rule provides the
//! local error estimate; the interval with the largest estimate is bisected
//! until the global estimate drops below `max(abs_tol, rel_tol * |I|)`.
//! Semi-infinite ranges are mapped onto `[0, 1)` by `x = a + t / (1 - t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and work limit of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-7,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSettings {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let s = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", "must be > 0"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "must be > 0"));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::invalid("max_subdivisions", "must be >= 10"));
        }
        Ok(())
    }

    /// Tighter settings used where a quadrature serves as a reference value.
    pub fn reference() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Turns a non-converged result into [`Error::Convergence`].
    pub fn check(self, func: &'static str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Convergence {
                func,
                value: self.value,
                error_estimate: self.error,
            })
        }
    }
}

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
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
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

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One application of the 21-point Kronrod rule on `[a, b]`, with the
/// QUADPACK error scaling.
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for (j, wg) in WG.iter().enumerate() {
        let jj = 2 * j + 1;
        let dx = half * XGK[jj];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        res_g += wg * (f1 + f2);
        res_k += WGK[jj] * (f1 + f2);
        res_abs += WGK[jj] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jj = 2 * j;
        let dx = half * XGK[jj];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jj] = f1;
        fv2[jj] = f2;
        res_k += WGK[jj] * (f1 + f2);
        res_abs += WGK[jj] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let result = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, settings: &QuadratureSettings) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }

    let (value, error) = gk21(&mut f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 21;

    loop {
        let target = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_err <= target {
            return QuadResult {
                value: total,
                error: total_err,
                evaluations,
                converged: true,
            };
        }
        if segments.len() >= settings.max_subdivisions {
            break;
        }

        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, s)| {
                if s.error > acc.1 {
                    (i, s.error)
                } else {
                    acc
                }
            });
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        // interval cannot be split further in floating point
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            break;
        }

        let (v1, e1) = gk21(&mut f, seg.a, mid);
        let (v2, e2) = gk21(&mut f, mid, seg.b);
        evaluations += 42;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        segments[worst] = Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        };
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });

        // refresh the running sums periodically to shed accumulated rounding
        if segments.len() % 64 == 0 {
            total = segments.iter().map(|s| s.value).sum();
            total_err = segments.iter().map(|s| s.error).sum();
        }
    }

    let value = segments.iter().map(|s| s.value).sum::<f64>();
    let error = segments.iter().map(|s| s.error).sum::<f64>();
    let target = settings.abs_tol.max(settings.rel_tol * value.abs());
    QuadResult {
        value,
        error,
        evaluations,
        converged: error <= target,
    }
}

/// Integrates `f` over `[a, ∞)`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, settings: &QuadratureSettings) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |t| {
            let one_minus = 1.0 - t;
            let x = a + t / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        settings,
    )
}
