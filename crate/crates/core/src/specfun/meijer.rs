//! Meijer G-functions of the two shapes that appear in the product of two
//! gamma-distributed powers:
//!
//! - `G^{2,0}_{0,2}(x | b1, b2) = 2 x^{(b1+b2)/2} K_{b1-b2}(2√x)`, the density kernel;
//! - `G^{2,1}_{1,3}(x | 1 + b3; b1, b2, b3)`, its running integral
//!   `x^{b3} ∫₀ˣ u^{-b3-1} G^{2,0}_{0,2}(u | b1, b2) du`, valid for `b3 < min(b1, b2)`.
//!
//! Parameters follow the standard convention: the first `m = 2` lower
//! parameters enter as `Γ(b_j - s)` in the numerator and `b3` as
//! `1/Γ(1 - b3 + s)` in the denominator, so the Mellin–Barnes integrand of the
//! `G^{2,1}_{1,3}` reduces to `Γ(b1 - s) Γ(b2 - s) x^s / (s - b3)`.
//!
//! With `c = b1 - b3`, `d = b2 - b3`, the function equals
//! `Γ(c) Γ(d) x^{b3} P(G_c G_d <= x)` where `G_c`, `G_d` are independent
//! unit-scale gamma variates; [`product_gamma_cdf`] evaluates that probability
//! and its complement.
//!
//! Two evaluation paths:
//!
//! - residue series (two `₁F₂` series from the poles of `Γ(c - s)` and
//!   `Γ(d - s)`) when `c - d` is safely non-integer and the argument is small
//!   enough that the two series do not cancel;
//! - numerical Mellin–Barnes integration along a vertical line through the
//!   saddle point of the integrand otherwise. A line right of the pole at
//!   `s = b3` yields the CDF directly; a line left of it yields the complement
//!   after removing the residue. The side with the smaller saddle magnitude is
//!   used, which keeps the smaller of `P` and `1 - P` to full relative accuracy.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::{digamma, ln_gamma_complex, ln_gamma_pos, ln_gamma_signed};
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadratureSettings};

/// Target accuracy of an iterative special-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-15,
            rel_tol: 1e-12,
        }
    }
}

impl Accuracy {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::invalid("accuracy", "tolerances must be > 0"));
        }
        Ok(Self { abs_tol, rel_tol })
    }
}

/// Which path produced a [`ProductGammaCdf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GMethod {
    ResidueSeries,
    MellinBarnesDirect,
    MellinBarnesComplement,
}

/// `P(G_c G_d <= t)` together with its complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductGammaCdf {
    pub cdf: f64,
    pub ccdf: f64,
    pub error: f64,
    pub method: GMethod,
}

const SERIES_MAX_ARG: f64 = 50.0;
const SERIES_MIN_INTEGER_GAP: f64 = 0.05;
const SERIES_MAX_CANCELLATION: f64 = 1e4;
// below this log-magnitude the contribution is far under f64 resolution of 1
const LN_NEGLIGIBLE: f64 = -800.0;

/// `Σ (a)_k / ((p)_k (q)_k k!) t^k` with the sum of absolute terms.
fn hyp1f2(a: f64, p: f64, q: f64, t: f64) -> Option<(f64, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..5000 {
        let kf = k as f64;
        term *= (a + kf) / ((p + kf) * (q + kf) * (kf + 1.0)) * t;
        sum += term;
        abs_sum += term.abs();
        if kf > t.sqrt() && term.abs() <= 1e-17 * sum.abs() {
            return Some((sum, abs_sum));
        }
    }
    None
}

fn residue_series(c: f64, d: f64, t: f64) -> Option<f64> {
    let gap = c - d;
    if (gap - gap.round()).abs() < SERIES_MIN_INTEGER_GAP || t > SERIES_MAX_ARG {
        return None;
    }
    let ln_norm = ln_gamma_pos(c) + ln_gamma_pos(d);
    let (lg1, sg1) = ln_gamma_signed(d - c).ok()?;
    let (lg2, sg2) = ln_gamma_signed(c - d).ok()?;
    let (s1, abs1) = hyp1f2(c, 1.0 + c, 1.0 + c - d, t)?;
    let (s2, abs2) = hyp1f2(d, 1.0 + d, 1.0 + d - c, t)?;
    let w1 = sg1 * (lg1 - ln_norm + c * t.ln()).exp() / c;
    let w2 = sg2 * (lg2 - ln_norm + d * t.ln()).exp() / d;
    let cdf = w1 * s1 + w2 * s2;
    let magnitude = w1.abs() * abs1 + w2.abs() * abs2;
    if !(cdf > 0.0) || magnitude > SERIES_MAX_CANCELLATION * cdf {
        return None;
    }
    Some(cdf)
}

/// Log of the Mellin–Barnes integrand `Γ(b1 - s) Γ(b2 - s) x^s [/(s - b3)]`.
#[derive(Debug, Clone, Copy)]
struct MbIntegrand {
    b1: f64,
    b2: f64,
    pole: Option<f64>,
    ln_x: f64,
}

impl MbIntegrand {
    fn ln_value(&self, s: Complex64) -> Complex64 {
        let mut v = ln_gamma_complex(self.b1 - s) + ln_gamma_complex(self.b2 - s) + s * self.ln_x;
        if let Some(b3) = self.pole {
            v -= (s - b3).ln();
        }
        v
    }

    /// Real-axis log-magnitude and its derivative (convex in σ).
    fn real_log(&self, sigma: f64) -> f64 {
        let mut h = ln_gamma_pos(self.b1 - sigma) + ln_gamma_pos(self.b2 - sigma) + sigma * self.ln_x;
        if let Some(b3) = self.pole {
            h -= (sigma - b3).abs().ln();
        }
        h
    }

    fn real_log_slope(&self, sigma: f64) -> f64 {
        let mut g = -digamma(self.b1 - sigma) - digamma(self.b2 - sigma) + self.ln_x;
        if let Some(b3) = self.pole {
            g -= 1.0 / (sigma - b3);
        }
        g
    }

    /// Root of the increasing slope on `(lo, hi)`; `lo` may be `-∞`.
    fn saddle(&self, lo: f64, hi: f64) -> f64 {
        let mut lo = lo;
        let mut hi = hi;
        if lo == f64::NEG_INFINITY {
            let mut step = 1.0;
            lo = hi - step;
            while self.real_log_slope(lo) > 0.0 {
                hi = lo;
                step *= 2.0;
                lo = hi - step;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.real_log_slope(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `(1/π) ∫₀^∞ Re exp(L(σ + iy) - L(σ)) dy` and the error estimate.
    fn scaled_line_integral(&self, sigma: f64, acc: &Accuracy) -> Result<(f64, f64)> {
        let l0 = self.ln_value(Complex64::new(sigma, 0.0)).re;
        let magnitude = |y: f64| (self.ln_value(Complex64::new(sigma, y)).re - l0).exp();

        let mut y_max = 1.0;
        while magnitude(y_max) > 1e-18 && y_max < 1e6 {
            y_max *= 2.0;
        }

        let settings = QuadratureSettings {
            abs_tol: acc.abs_tol,
            rel_tol: acc.rel_tol,
            max_subdivisions: 4000,
        };
        let r = integrate(
            |y| (self.ln_value(Complex64::new(sigma, y)) - l0).exp().re,
            0.0,
            y_max,
            &settings,
        );
        if !r.converged {
            return Err(Error::Convergence {
                func: "meijer_g(mellin-barnes)",
                value: r.value / PI,
                error_estimate: r.error / PI,
            });
        }
        Ok((r.value / PI, r.error / PI))
    }
}

fn check_positive(func: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain(func, format!("{name} = {v} must be positive and finite")));
    }
    Ok(())
}

/// `P(G_c G_d <= t)` for independent unit-scale gamma variates of shapes `c`, `d`.
pub fn product_gamma_cdf(c: f64, d: f64, t: f64, acc: &Accuracy) -> Result<ProductGammaCdf> {
    check_positive("product_gamma_cdf", "c", c)?;
    check_positive("product_gamma_cdf", "d", d)?;
    if t == 0.0 {
        return Ok(ProductGammaCdf {
            cdf: 0.0,
            ccdf: 1.0,
            error: 0.0,
            method: GMethod::MellinBarnesDirect,
        });
    }
    check_positive("product_gamma_cdf", "t", t)?;

    if let Some(cdf) = residue_series(c, d, t) {
        return Ok(ProductGammaCdf {
            cdf,
            ccdf: 1.0 - cdf,
            error: 1e-15 * SERIES_MAX_CANCELLATION,
            method: GMethod::ResidueSeries,
        });
    }
    mellin_barnes_cdf(c, d, t, acc)
}

/// Mellin–Barnes path of [`product_gamma_cdf`], exposed for cross-checks.
pub fn mellin_barnes_cdf(c: f64, d: f64, t: f64, acc: &Accuracy) -> Result<ProductGammaCdf> {
    let f = MbIntegrand {
        b1: c,
        b2: d,
        pole: Some(0.0),
        ln_x: t.ln(),
    };
    let ln_residue = ln_gamma_pos(c) + ln_gamma_pos(d);

    let sigma_direct = f.saddle(0.0, c.min(d));
    let sigma_left = f.saddle(f64::NEG_INFINITY, 0.0);
    let h_direct = f.real_log(sigma_direct) - ln_residue;
    let h_left = f.real_log(sigma_left) - ln_residue;

    if h_direct <= h_left {
        if h_direct < LN_NEGLIGIBLE {
            return Ok(ProductGammaCdf {
                cdf: 0.0,
                ccdf: 1.0,
                error: 0.0,
                method: GMethod::MellinBarnesDirect,
            });
        }
        let (s, e) = f.scaled_line_integral(sigma_direct, acc)?;
        let scale = h_direct.exp();
        let cdf = (s * scale).clamp(0.0, 1.0);
        Ok(ProductGammaCdf {
            cdf,
            ccdf: 1.0 - cdf,
            error: e * scale,
            method: GMethod::MellinBarnesDirect,
        })
    } else {
        if h_left < LN_NEGLIGIBLE {
            return Ok(ProductGammaCdf {
                cdf: 1.0,
                ccdf: 0.0,
                error: 0.0,
                method: GMethod::MellinBarnesComplement,
            });
        }
        let (s, e) = f.scaled_line_integral(sigma_left, acc)?;
        let scale = h_left.exp();
        // the left line carries the sign of 1/(s - b3) < 0
        let ccdf = (-s * scale).clamp(0.0, 1.0);
        Ok(ProductGammaCdf {
            cdf: 1.0 - ccdf,
            ccdf,
            error: e * scale,
            method: GMethod::MellinBarnesComplement,
        })
    }
}

/// `G^{2,1}_{1,3}(x | a1; b1, b2, b3)` for the pattern `a1 = 1 + b3`,
/// `b3 < min(b1, b2)`. The product-of-powers CDF uses
/// `a1 = 1 - (μ1+μ2)/2`, `b = ((μ1-μ2)/2, (μ2-μ1)/2, -(μ1+μ2)/2)`; see
/// [`product_cdf_parameters`].
pub fn meijer_g_2131(a1: f64, b: [f64; 3], x: f64) -> Result<f64> {
    meijer_g_2131_with(a1, b, x, &Accuracy::default())
}

pub fn meijer_g_2131_with(a1: f64, b: [f64; 3], x: f64, acc: &Accuracy) -> Result<f64> {
    let [b1, b2, b3] = b;
    if b.iter().any(|v| !v.is_finite()) || !a1.is_finite() {
        return Err(Error::domain("meijer_g_2131", "parameters must be finite"));
    }
    if (a1 - 1.0 - b3).abs() > 1e-12 * (1.0 + a1.abs()) || !(b3 < b1.min(b2)) {
        return Err(Error::domain(
            "meijer_g_2131",
            format!("unsupported parameter pattern a1 = {a1}, b = {b:?}; need a1 = 1 + b3 < 1 + min(b1, b2)"),
        ));
    }
    check_positive("meijer_g_2131", "x", x)?;
    let c = b1 - b3;
    let d = b2 - b3;
    let p = product_gamma_cdf(c, d, x, acc)?;
    let ln_scale = ln_gamma_pos(c) + ln_gamma_pos(d) + b3 * x.ln();
    Ok(p.cdf * ln_scale.exp())
}

/// `(a1, [b1, b2, b3])` of the `G^{2,1}_{1,3}` in the product CDF of two
/// powers with shapes `μ1`, `μ2`.
pub fn product_cdf_parameters(mu1: f64, mu2: f64) -> (f64, [f64; 3]) {
    let half_sum = 0.5 * (mu1 + mu2);
    let half_diff = 0.5 * (mu1 - mu2);
    (1.0 - half_sum, [half_diff, -half_diff, -half_sum])
}

/// `G^{2,0}_{0,2}(x | b1, b2)` by the same Mellin–Barnes line integral used
/// for the `G^{2,1}_{1,3}`, without the extra pole.
pub fn meijer_g_2002(b1: f64, b2: f64, x: f64) -> Result<f64> {
    check_positive("meijer_g_2002", "x", x)?;
    let f = MbIntegrand {
        b1,
        b2,
        pole: None,
        ln_x: x.ln(),
    };
    let sigma = f.saddle(f64::NEG_INFINITY, b1.min(b2));
    let h = f.real_log(sigma);
    let (s, _) = f.scaled_line_integral(sigma, &Accuracy::default())?;
    Ok(s * h.exp())
}
