//! The α-μ family: envelope, squared envelope (power) and the product of two
//! hop powers.
//!
//! For an envelope `r` with parameters `(α, μ, r̂)`, `r^α` is gamma
//! distributed with shape `μ` and mean `r̂^α`. The power `x = r²` therefore
//! satisfies `λ x^{α/2} ~ Gamma(μ, 1)` with `λ = μ / r̂^α`, and for two hops
//! with a common `α` the product `z = x₁ x₂` satisfies
//! `λ₁λ₂ z^{α/2} ~ G_{μ₁} G_{μ₂}`, the product of two independent unit-scale
//! gamma variates. All closed forms below follow from these three facts.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadratureSettings};
use crate::specfun::gamma::ln_gamma_pos;
use crate::specfun::{ln_bessel_k, product_gamma_cdf, reg_gamma_pair, Accuracy};

/// One α-μ fading branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaMuParams {
    /// Nonlinearity exponent α.
    pub alpha: f64,
    /// Shape μ: the inverse normalized variance of `r^α`.
    pub mu: f64,
    /// α-root mean value, `r̂ = E[r^α]^{1/α}`.
    pub r_hat: f64,
}

impl AlphaMuParams {
    pub fn new(alpha: f64, mu: f64, r_hat: f64) -> Result<Self> {
        let p = Self { alpha, mu, r_hat };
        p.validate()?;
        Ok(p)
    }

    pub fn rayleigh() -> Self {
        Self {
            alpha: 2.0,
            mu: 1.0,
            r_hat: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::invalid("alpha", format!("{} must be > 0", self.alpha)));
        }
        if !(self.mu >= 0.5) || !self.mu.is_finite() {
            return Err(Error::invalid("mu", format!("{} must be >= 0.5", self.mu)));
        }
        if !(self.r_hat > 0.0) || !self.r_hat.is_finite() {
            return Err(Error::invalid("r_hat", format!("{} must be > 0", self.r_hat)));
        }
        Ok(())
    }

    /// Rate of the squared-envelope law, `λ = μ / r̂^α`.
    pub fn lambda(&self) -> PowerLambda {
        PowerLambda(self.mu / self.r_hat.powf(self.alpha))
    }
}

/// `λ = μ / r̂^α`, the rate of `x^{α/2}` for the power `x = r²`.
///
/// The exponent is the full `α`: with `α/2` the squared-envelope density
/// does not integrate to one.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerLambda(pub f64);

impl PowerLambda {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Two hops whose powers are multiplied, `Z = h₁² h₂²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductDistParams {
    pub hop1: AlphaMuParams,
    pub hop2: AlphaMuParams,
}

impl ProductDistParams {
    pub fn new(hop1: AlphaMuParams, hop2: AlphaMuParams) -> Result<Self> {
        hop1.validate()?;
        hop2.validate()?;
        Ok(Self { hop1, hop2 })
    }

    fn require_equal_alpha(&self) -> Result<f64> {
        if self.hop1.alpha != self.hop2.alpha {
            return Err(Error::AlphaMismatch {
                hop1: self.hop1.alpha,
                hop2: self.hop2.alpha,
            });
        }
        Ok(self.hop1.alpha)
    }

    /// `λ₁λ₂ z^{α/2}`, the argument of the unit product-of-gammas law.
    fn gamma_product_arg(&self, alpha: f64, z: f64) -> f64 {
        self.hop1.lambda().0 * self.hop2.lambda().0 * z.powf(0.5 * alpha)
    }
}

/// How [`cdf_product`] evaluates the product CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CdfRoute {
    /// Closed form through the `G^{2,1}_{1,3}` Meijer G-function.
    Meijer,
    /// Adaptive quadrature of the Bessel-K density.
    Quadrature,
}

fn positive(func: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) {
        return Err(Error::domain(func, format!("{name} = {v} must be > 0")));
    }
    Ok(())
}

fn nonnegative(func: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::domain(func, format!("{name} = {v} must be >= 0")));
    }
    Ok(())
}

/// Envelope density `f_h(r)`.
pub fn pdf_envelope(p: &AlphaMuParams, r: f64) -> Result<f64> {
    positive("pdf_envelope", "r", r)?;
    let AlphaMuParams { alpha, mu, r_hat } = *p;
    let ln = alpha.ln() + mu * mu.ln() + (alpha * mu - 1.0) * r.ln()
        - alpha * mu * r_hat.ln()
        - ln_gamma_pos(mu)
        - mu * (r / r_hat).powf(alpha);
    Ok(ln.exp())
}

/// Envelope CDF `P(μ, μ (r/r̂)^α)`.
pub fn cdf_envelope(p: &AlphaMuParams, r: f64) -> Result<f64> {
    cdf_envelope_pair(p, r).map(|(f, _)| f)
}

/// `(F_h(r), 1 - F_h(r))`.
pub fn cdf_envelope_pair(p: &AlphaMuParams, r: f64) -> Result<(f64, f64)> {
    nonnegative("cdf_envelope", "r", r)?;
    reg_gamma_pair(p.mu, p.mu * (r / p.r_hat).powf(p.alpha))
}

/// Density of the power `x = h²`.
pub fn pdf_power(p: &AlphaMuParams, x: f64) -> Result<f64> {
    positive("pdf_power", "x", x)?;
    Ok(ln_pdf_power(p, x).exp())
}

fn ln_pdf_power(p: &AlphaMuParams, x: f64) -> f64 {
    let AlphaMuParams { alpha, mu, .. } = *p;
    let lambda = p.lambda().0;
    (0.5 * alpha).ln() + mu * lambda.ln() + (0.5 * alpha * mu - 1.0) * x.ln()
        - lambda * x.powf(0.5 * alpha)
        - ln_gamma_pos(mu)
}

/// CDF of the power `x = h²`; shares the envelope code path at `√x`.
pub fn cdf_power(p: &AlphaMuParams, x: f64) -> Result<f64> {
    cdf_power_pair(p, x).map(|(f, _)| f)
}

/// `(F_{h²}(x), 1 - F_{h²}(x))`.
pub fn cdf_power_pair(p: &AlphaMuParams, x: f64) -> Result<(f64, f64)> {
    nonnegative("cdf_power", "x", x)?;
    cdf_envelope_pair(p, x.sqrt())
}

/// Density of `Z = h₁² h₂²` for hops with a common `α`:
/// `α (λ₁λ₂)^{(μ₁+μ₂)/2} z^{α(μ₁+μ₂)/4 - 1} K_{μ₁-μ₂}(2√(λ₁λ₂ z^{α/2})) / (Γ(μ₁)Γ(μ₂))`.
pub fn pdf_product(pp: &ProductDistParams, z: f64) -> Result<f64> {
    let alpha = pp.require_equal_alpha()?;
    positive("pdf_product", "z", z)?;
    ln_pdf_product(pp, alpha, z).map(f64::exp)
}

fn ln_pdf_product(pp: &ProductDistParams, alpha: f64, z: f64) -> Result<f64> {
    let (mu1, mu2) = (pp.hop1.mu, pp.hop2.mu);
    let half_sum = 0.5 * (mu1 + mu2);
    let lam = pp.hop1.lambda().0 * pp.hop2.lambda().0;
    let t = pp.gamma_product_arg(alpha, z);
    if t == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let arg = 2.0 * t.sqrt();
    if arg == f64::INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(alpha.ln() + half_sum * lam.ln() + (0.5 * alpha * half_sum - 1.0) * z.ln() + ln_bessel_k(mu1 - mu2, arg)?
        - ln_gamma_pos(mu1)
        - ln_gamma_pos(mu2))
}

/// CDF of `Z = h₁² h₂²` through the chosen route, clamped to `[0, 1]`.
pub fn cdf_product(pp: &ProductDistParams, z: f64, route: CdfRoute) -> Result<f64> {
    cdf_product_pair(pp, z, route).map(|(f, _)| f)
}

/// `(F_Z(z), 1 - F_Z(z))`; the smaller member keeps its relative accuracy.
pub fn cdf_product_pair(pp: &ProductDistParams, z: f64, route: CdfRoute) -> Result<(f64, f64)> {
    let alpha = pp.require_equal_alpha()?;
    nonnegative("cdf_product", "z", z)?;
    if z == 0.0 {
        return Ok((0.0, 1.0));
    }
    if z == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    let t = pp.gamma_product_arg(alpha, z);
    match route {
        CdfRoute::Meijer => {
            let p = product_gamma_cdf(pp.hop1.mu, pp.hop2.mu, t, &Accuracy::default())?;
            Ok((p.cdf, p.ccdf))
        }
        CdfRoute::Quadrature => product_cdf_by_quadrature(pp, alpha, t),
    }
}

/// Integrates `pdf_product` in `u = √(λ₁λ₂ z^{α/2})`, where the density is
/// at most weakly singular at the origin.
fn product_cdf_by_quadrature(pp: &ProductDistParams, alpha: f64, t: f64) -> Result<(f64, f64)> {
    let lam = pp.hop1.lambda().0 * pp.hop2.lambda().0;
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        // z(u) = (u² / λ₁λ₂)^{2/α}, dz/du = (4/α) z / u
        let ln_z = (2.0 / alpha) * (2.0 * u.ln() - lam.ln());
        let z = ln_z.exp();
        match ln_pdf_product(pp, alpha, z) {
            Ok(l) => (l + ln_z - u.ln()).exp() * (4.0 / alpha),
            Err(_) => f64::NAN,
        }
    };
    let settings = QuadratureSettings {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        max_subdivisions: 4000,
    };
    let upper = t.sqrt();
    // rough median of √(G₁G₂)
    let median = (pp.hop1.mu * pp.hop2.mu).sqrt();
    if upper <= median {
        let r = integrate(integrand, 0.0, upper, &settings).check("cdf_product(quadrature)")?;
        let f = r.value.clamp(0.0, 1.0);
        Ok((f, 1.0 - f))
    } else {
        let r = integrate_to_infinity(integrand, upper, &settings).check("cdf_product(quadrature)")?;
        let q = r.value.clamp(0.0, 1.0);
        Ok((1.0 - q, q))
    }
}

/// Product CDF for hops with arbitrary exponents, `E_Y[F_X(z / Y)]`, by one
/// semi-infinite quadrature over the gamma variate of the second hop.
pub fn cdf_product_numeric(pp: &ProductDistParams, z: f64) -> Result<f64> {
    nonnegative("cdf_product_numeric", "z", z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let (h1, h2) = (pp.hop1, pp.hop2);
    let lam2 = h2.lambda().0;
    let mu2 = h2.mu;
    let norm = (mu2.ln() + ln_gamma_pos(mu2)).exp();
    // g = λ₂ y^{α₂/2} ~ Gamma(μ₂); s = g^{μ₂} flattens the g^{μ₂-1} factor
    let integrand = |s: f64| -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let g = s.powf(1.0 / mu2);
        let y = (g / lam2).powf(2.0 / h2.alpha);
        let fx = if y > 0.0 {
            cdf_power(&h1, z / y).unwrap_or(1.0)
        } else {
            1.0
        };
        fx * (-g).exp() / norm
    };
    let r = integrate_to_infinity(integrand, 0.0, &QuadratureSettings::reference()).check("cdf_product_numeric")?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// Draws envelopes from one α-μ branch: `r = r̂ (g/μ)^{1/α}`, `g ~ Gamma(μ, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct EnvelopeSampler {
    params: AlphaMuParams,
    gamma: Gamma<f64>,
}

impl EnvelopeSampler {
    pub fn new(params: &AlphaMuParams) -> Result<Self> {
        params.validate()?;
        let gamma = Gamma::new(params.mu, 1.0).map_err(|e| Error::invalid("mu", e.to_string()))?;
        Ok(Self {
            params: *params,
            gamma,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g: f64 = self.gamma.sample(rng);
        self.params.r_hat * (g / self.params.mu).powf(1.0 / self.params.alpha)
    }
}

/// One envelope draw.
pub fn sample_envelope<R: Rng + ?Sized>(p: &AlphaMuParams, rng: &mut R) -> Result<f64> {
    Ok(EnvelopeSampler::new(p)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(alpha: f64, mu: f64, r_hat: f64) -> AlphaMuParams {
        AlphaMuParams::new(alpha, mu, r_hat).unwrap()
    }

    #[test]
    fn rayleigh_reductions() {
        let ray = AlphaMuParams::rayleigh();
        for &r in &[0.01f64, 0.3, 1.0, 2.2] {
            let e = 2.0 * r * (-r * r).exp();
            assert!((pdf_envelope(&ray, r).unwrap() - e).abs() < 1e-15);
            assert!((cdf_envelope(&ray, r).unwrap() - (1.0 - (-r * r).exp())).abs() < 1e-15);
            assert!((pdf_power(&ray, r).unwrap() - (-r).exp()).abs() < 1e-15);
            assert!((cdf_power(&ray, r).unwrap() - (1.0 - (-r).exp())).abs() < 1e-15);
        }
        assert_eq!(cdf_envelope(&ray, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn nakagami_reduction() {
        // Nakagami-m density with Ω = r̂²: 2 m^m r^{2m-1} e^{-m r²/Ω} / (Γ(m) Ω^m)
        let m: f64 = 2.0;
        let omega: f64 = 1.7 * 1.7;
        let q = p(2.0, m, 1.7);
        for &r in &[0.2f64, 1.0, 1.7, 3.5] {
            let e = 2.0 * m.powf(m) * r.powf(2.0 * m - 1.0) * (-m * r * r / omega).exp() / omega.powf(m);
            assert!((pdf_envelope(&q, r).unwrap() - e).abs() < 1e-14 * e.max(1.0));
        }
        // power law is Gamma(2, rate 2) for r̂ = 1
        let q = p(2.0, 2.0, 1.0);
        for &x in &[0.1f64, 0.5, 2.0] {
            let e = 4.0 * x * (-2.0 * x).exp();
            assert!((pdf_power(&q, x).unwrap() - e).abs() < 1e-15);
        }
        let closed = 1.0 - 3.0 * (-2.0f64).exp();
        assert!((cdf_power(&q, 1.0).unwrap() - closed).abs() < 1e-15);
    }

    #[test]
    fn weibull_reduction() {
        let q = p(3.0, 1.0, 2.0);
        assert!((cdf_envelope(&q, 2.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn densities_integrate_to_one() {
        let s = QuadratureSettings::reference();
        for &(a, m, rh) in &[(2.0, 1.0, 1.0), (3.0, 1.0, 1.0), (2.0, 2.0, 1.0), (1.0, 0.5, 0.7), (4.0, 3.5, 2.0)] {
            let q = p(a, m, rh);
            let env = integrate_to_infinity(|r| pdf_envelope(&q, r).unwrap_or(0.0), 0.0, &s);
            assert!((env.value - 1.0).abs() < 1e-8, "{q:?}: {env:?}");
            // substitute x = w² so the x^{αμ/2-1} endpoint behaviour is tame
            let pow = integrate_to_infinity(|w| 2.0 * w * pdf_power(&q, w * w).unwrap_or(0.0), 0.0, &s);
            assert!((pow.value - 1.0).abs() < 1e-8, "{q:?}: {pow:?}");
        }
    }

    #[test]
    fn power_cdf_shares_envelope_path() {
        let q = p(2.7, 1.3, 0.8);
        for &x in &[0.0, 1e-6, 0.4, 1.0, 9.0] {
            assert_eq!(cdf_power(&q, x).unwrap(), cdf_envelope(&q, x.sqrt()).unwrap());
        }
    }

    #[test]
    fn unit_exponential_product() {
        let pp = ProductDistParams::new(AlphaMuParams::rayleigh(), AlphaMuParams::rayleigh()).unwrap();
        for &z in &[1e-6f64, 0.05, 0.1875, 1.0, 7.0, 60.0] {
            let k0 = 2.0 * bessel_k(0.0, 2.0 * z.sqrt()).unwrap();
            assert!(((pdf_product(&pp, z).unwrap() - k0) / k0).abs() < 1e-13);
            let closed = 1.0 - 2.0 * z.sqrt() * bessel_k(1.0, 2.0 * z.sqrt()).unwrap();
            for route in [CdfRoute::Meijer, CdfRoute::Quadrature] {
                let f = cdf_product(&pp, z, route).unwrap();
                assert!((f - closed).abs() < 1e-9, "z={z} {route:?}: {f} vs {closed}");
            }
        }
    }

    #[test]
    fn product_cdf_limits() {
        let pp = ProductDistParams::new(p(3.0, 1.5, 1.0), p(3.0, 0.5, 2.0)).unwrap();
        for route in [CdfRoute::Meijer, CdfRoute::Quadrature] {
            assert_eq!(cdf_product(&pp, 0.0, route).unwrap(), 0.0);
            assert!(cdf_product(&pp, 1e-12, route).unwrap() < 1e-6);
            assert!(cdf_product(&pp, 1e9, route).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn alpha_mismatch_is_rejected() {
        let pp = ProductDistParams::new(p(2.0, 1.0, 1.0), p(3.0, 1.0, 1.0)).unwrap();
        assert!(matches!(pdf_product(&pp, 1.0), Err(Error::AlphaMismatch { .. })));
        assert!(matches!(cdf_product(&pp, 1.0, CdfRoute::Meijer), Err(Error::AlphaMismatch { .. })));
        // the numeric route has no such restriction
        let f = cdf_product_numeric(&pp, 1.0).unwrap();
        assert!(f > 0.0 && f < 1.0);
    }

    #[test]
    fn numeric_product_cdf_matches_closed_form() {
        let pp = ProductDistParams::new(p(2.5, 2.0, 1.0), p(2.5, 0.8, 1.3)).unwrap();
        for &z in &[0.01, 0.3, 1.0, 4.0] {
            let a = cdf_product_numeric(&pp, z).unwrap();
            let b = cdf_product(&pp, z, CdfRoute::Meijer).unwrap();
            assert!((a - b).abs() < 1e-9, "z={z}: {a} vs {b}");
        }
    }

    #[test]
    fn domain_errors() {
        let q = AlphaMuParams::rayleigh();
        assert!(pdf_envelope(&q, 0.0).is_err());
        assert!(pdf_power(&q, -1.0).is_err());
        assert!(cdf_envelope(&q, -1.0).is_err());
        assert!(AlphaMuParams::new(2.0, 0.3, 1.0).is_err());
        assert!(AlphaMuParams::new(0.0, 1.0, 1.0).is_err());
        assert!(AlphaMuParams::new(2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sampler_scale() {
        let q = p(3.0, 1.0, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = EnvelopeSampler::new(&q).unwrap();
        let n = 200_000;
        let mean = (0..n).map(|_| s.sample(&mut rng).powf(3.0)).sum::<f64>() / n as f64;
        // E[r^α] = r̂^α = 8, Var = 64
        assert!((mean - 8.0).abs() < 3.0 * 8.0 / (n as f64).sqrt() * 1.5);
        assert!(sample_envelope(&q, &mut rng).unwrap() > 0.0);
    }
}
