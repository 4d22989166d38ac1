//! Modified Bessel function of the second kind for real order.
//!
//! The fractional part `μ ∈ [-1/2, 1/2)` of the order is handled by Temme's
//! series for `x < 2` and by Steed's continued fraction (CF2) for `x >= 2`;
//! the integer part is reached by forward recurrence, which is stable for K.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;
const SWITCH_X: f64 = 2.0;

/// Coefficients of `1/Γ(z) = Σ_{k>=1} c_k z^k`.
#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const RECIP_GAMMA: [f64; 26] = [
    1.0,
    0.5772156649015328606,
    -0.6558780715202538811,
    -0.0420026350340952355,
    0.1665386113822914895,
    -0.0421977345555443367,
    -0.0096219715278769736,
    0.0072189432466630995,
    -0.0011651675918590651,
    -0.0002152416741149510,
    0.0001280502823881162,
    -0.0000201348547807882,
    -0.0000012504934821427,
    0.0000011330272319817,
    -0.0000002056338416978,
    0.0000000061160951045,
    0.0000000050020075003,
    -0.0000000011812745705,
    0.0000000001043426712,
    0.0000000000077822634,
    -0.0000000000036968056,
    0.0000000000005100370,
    -0.0000000000000205833,
    -0.0000000000000053481,
    0.0000000000000012268,
    -0.0000000000000001181,
];

/// `(gam1, gam2, 1/Γ(1+μ), 1/Γ(1-μ))` with
/// `gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ)` and `gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2`.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ c_{k+1} μ^k: split into even and odd powers
    let mu2 = mu * mu;
    let mut even = 0.0;
    let mut odd = 0.0;
    let mut p = 1.0;
    for k in (0..RECIP_GAMMA.len()).step_by(2) {
        even += RECIP_GAMMA[k] * p;
        if k + 1 < RECIP_GAMMA.len() {
            odd += RECIP_GAMMA[k + 1] * p;
        }
        p *= mu2;
    }
    let gam1 = -odd;
    let gam2 = even;
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

/// `(K_μ(x), K_{μ+1}(x))` by Temme's series, `|μ| <= 1/2`, multiplied by `e^x`
/// when `scaled`.
pub(crate) fn k_pair_series(mu: f64, x: f64, scaled: bool) -> Result<(f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(mu);

    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            func: "bessel_k(series)",
            value: sum,
            error_estimate: f64::NAN,
        });
    }
    let scale = if scaled { x.exp() } else { 1.0 };
    Ok((sum * scale, sum1 * (2.0 / x) * scale))
}

/// `(K_μ(x), K_{μ+1}(x))` by Steed's continued fraction, `|μ| <= 1/2`.
pub(crate) fn k_pair_cf2(mu: f64, x: f64, scaled: bool) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            func: "bessel_k(cf2)",
            value: s,
            error_estimate: f64::NAN,
        });
    }
    h *= a1;
    let mut kmu = (PI / (2.0 * x)).sqrt() / s;
    if !scaled {
        kmu *= (-x).exp();
    }
    let k1 = kmu * (mu + x + 0.5 - h) / x;
    Ok((kmu, k1))
}

fn bessel_k_impl(nu: f64, x: f64, scaled: bool) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("bessel_k", format!("x = {x} must be positive")));
    }
    if !nu.is_finite() {
        return Err(Error::domain("bessel_k", "order must be finite"));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut kmu, mut k1) = if x < SWITCH_X {
        k_pair_series(mu, x, scaled)?
    } else {
        k_pair_cf2(mu, x, scaled)?
    };
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    Ok(kmu)
}

/// `K_ν(x)` for real `ν` and `x > 0`. Underflows to zero for very large `x`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    bessel_k_impl(nu, x, false)
}

/// `e^x K_ν(x)`.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    bessel_k_impl(nu, x, true)
}

/// `ln K_ν(x)`, finite wherever `K_ν(x)` is representable after scaling.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    let ks = bessel_k_scaled(nu, x)?;
    if ks.is_finite() && ks > 0.0 {
        return Ok(ks.ln() - x);
    }
    // small-argument overflow: leading term Γ(ν)/2 (2/x)^ν
    let nu = nu.abs();
    Ok(super::gamma::ln_gamma_pos(nu) - std::f64::consts::LN_2 + nu * (2.0 / x).ln())
}

/// Hankel large-argument expansion truncated at its smallest term.
/// Independent of the main evaluator; used for cross-checks.
pub fn bessel_k_asymptotic(nu: f64, x: f64) -> f64 {
    let four_nu2 = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (four_nu2 - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}
