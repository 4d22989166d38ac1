//! Gamma-family functions: log-gamma (real and complex), signed gamma and
//! digamma.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;

#[allow(clippy::excessive_precision, clippy::unreadable_literal)]
const LANCZOS: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x >= 0.5`.
fn lanczos_ln_gamma(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Natural logarithm of the gamma function for positive real arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be positive and finite")));
    }
    Ok(ln_gamma_pos(x))
}

/// Unchecked variant for call sites that already validated `x > 0`.
pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x
        lanczos_ln_gamma(x + 1.0) - x.ln()
    } else {
        lanczos_ln_gamma(x)
    }
}

/// `ln |Γ(x)|` and the sign of `Γ(x)` for any real, non-pole `x`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || (x <= 0.0 && x == x.floor()) {
        return Err(Error::domain("ln_gamma_signed", format!("x = {x} is a pole")));
    }
    if x > 0.0 {
        return Ok((ln_gamma_pos(x), 1.0));
    }
    // reflection: Γ(x) Γ(1 - x) = π / sin(πx)
    let s = (PI * x).sin();
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    Ok(((PI / s.abs()).ln() - ln_gamma_pos(1.0 - x), sign))
}

/// Complex log-gamma on the principal sheet of the Lanczos form. Only
/// `exp` of the result is meaningful when `Re z < 0.5` (the branch of the
/// imaginary part is not normalized).
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    // lift into the half plane where the Lanczos sum is accurate
    while z.re < 0.5 {
        shift += z.ln();
        z += 1.0;
    }
    let zm = z - 1.0;
    let mut sum = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += *c / (zm + i as f64);
    }
    let t = zm + (LANCZOS_G + 0.5);
    HALF_LN_2PI + (zm + 0.5) * t.ln() - t + sum.ln() - shift
}

/// Digamma function for positive arguments.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    acc + x.ln() - 0.5 * inv - tail
}
