//! Regularized incomplete gamma functions.
//!
//! Power series for `x < s + 1`, Lentz continued fraction otherwise; both
//! halves `P` and `Q = 1 - P` are produced together so that whichever is
//! small keeps its relative accuracy.

use super::gamma::ln_gamma_pos;
use crate::error::{Error, Result};

const MAX_ITER: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// `(P(s, x), Q(s, x))`.
pub fn reg_gamma_pair(s: f64, x: f64) -> Result<(f64, f64)> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain("reg_lower_gamma", format!("s = {s} must be positive")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("reg_lower_gamma", format!("x = {x} must be nonnegative")));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x == f64::INFINITY {
        return Ok((1.0, 0.0));
    }

    let ln_prefactor = s * x.ln() - x - ln_gamma_pos(s);
    if x < s + 1.0 {
        let p = series(s, x, ln_prefactor)?;
        Ok((p, 1.0 - p))
    } else {
        let q = continued_fraction(s, x, ln_prefactor)?;
        Ok((1.0 - q, q))
    }
}

/// Regularized lower incomplete gamma `P(s, x) = γ(s, x) / Γ(s)`.
pub fn reg_lower_gamma(s: f64, x: f64) -> Result<f64> {
    reg_gamma_pair(s, x).map(|(p, _)| p)
}

/// Regularized upper incomplete gamma `Q(s, x) = 1 - P(s, x)`.
pub fn reg_upper_gamma(s: f64, x: f64) -> Result<f64> {
    reg_gamma_pair(s, x).map(|(_, q)| q)
}

fn series(s: f64, x: f64, ln_prefactor: f64) -> Result<f64> {
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok((sum.ln() + ln_prefactor).exp().min(1.0));
        }
    }
    Err(Error::Convergence {
        func: "reg_lower_gamma(series)",
        value: (sum.ln() + ln_prefactor).exp(),
        error_estimate: term.abs(),
    })
}

fn continued_fraction(s: f64, x: f64, ln_prefactor: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok((h.ln() + ln_prefactor).exp().min(1.0));
        }
    }
    Err(Error::Convergence {
        func: "reg_upper_gamma(continued fraction)",
        value: (h.ln() + ln_prefactor).exp(),
        error_estimate: f64::NAN,
    })
}
