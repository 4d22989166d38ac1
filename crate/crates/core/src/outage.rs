//! Analytic outage engines.
//!
//! With `Z = h₁²h₂²` and `V = h₃²` independent:
//!
//! - DF is in outage unless both `V < 1/(κν)` (relay decodes) and `Z`
//!   clears the destination threshold, so `P = 1 − F_V(v*)(1 − F_Z(c))`.
//! - AF is in outage surely when `V ≥ v* = 1/(κν)`; below that the outage
//!   event is `Z < ν(β₃V + β₄)/(β₁ − β₂νV)`, integrated against `f_V`.
//! - Both tend to `1 − F_V(v*)` as `P_S → ∞`.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{cdf_power_pair, AlphaMuParams, CdfRoute, ProductDistParams};
use crate::quad::integrate;
pub use crate::quad::QuadratureSettings;
use crate::relaysys::{derive_constants, DerivedConstants, SystemConfig};
use crate::specfun::gamma::ln_gamma_pos;
use crate::specfun::{product_gamma_cdf, reg_gamma_pair, Accuracy};

/// Error attributed to a single special-function evaluation.
const SPECFUN_ERROR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutageMethod {
    DfAnalytic,
    AfAnalytic,
    HighSnr,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub value: f64,
    pub method: OutageMethod,
    /// Estimated absolute error of `value` from series and quadrature.
    pub numeric_error: f64,
}

fn equal_alpha(pp: &ProductDistParams) -> Result<f64> {
    if pp.hop1.alpha != pp.hop2.alpha {
        return Err(Error::AlphaMismatch {
            hop1: pp.hop1.alpha,
            hop2: pp.hop2.alpha,
        });
    }
    Ok(pp.hop1.alpha)
}

/// `(F_Z(z), 1 − F_Z(z), error)` via the product-of-gammas law.
fn product_cdf(pp: &ProductDistParams, alpha: f64, k: &DerivedConstants, z: f64) -> Result<(f64, f64, f64)> {
    if !(z < f64::INFINITY) {
        return Ok((1.0, 0.0, 0.0));
    }
    let t = k.lambda1 * k.lambda2 * z.powf(0.5 * alpha);
    if t == f64::INFINITY {
        return Ok((1.0, 0.0, 0.0));
    }
    let p = product_gamma_cdf(pp.hop1.mu, pp.hop2.mu, t, &Accuracy::default())?;
    Ok((p.cdf, p.ccdf, p.error))
}

/// Largest LBI power for which the relay decodes, `v* = 1/(κν)`.
pub fn lbi_threshold(k: &DerivedConstants) -> f64 {
    1.0 / (k.kappa * k.nu)
}

/// Destination threshold on `Z` for DF, `ν d₁^{m₁} d₂^{m₂} σ_D² / (κ P_S)`.
pub fn df_product_threshold(cfg: &SystemConfig, k: &DerivedConstants) -> f64 {
    k.nu * cfg.hop1_attenuation() * cfg.hop2_attenuation() * cfg.noise_dest_var / (k.kappa * cfg.source_power)
}

pub fn outage_df(cfg: &SystemConfig) -> Result<OutageResult> {
    cfg.validate()?;
    let pp = cfg.product_params();
    let alpha = equal_alpha(&pp)?;
    let k = derive_constants(cfg);
    let (p_v, q_v) = cdf_power_pair(&cfg.lbi_fading, lbi_threshold(&k))?;
    let (f_z, _, err_z) = product_cdf(&pp, alpha, &k, df_product_threshold(cfg, &k))?;
    // 1 − F_V (1 − F_Z) written as a sum of nonnegative terms
    let value = (q_v + p_v * f_z).clamp(0.0, 1.0);
    Ok(OutageResult {
        value,
        method: OutageMethod::DfAnalytic,
        numeric_error: p_v * err_z + SPECFUN_ERROR,
    })
}

/// Tail mass of the unit gamma law of the LBI power ignored beyond `g_cap`.
const LBI_TAIL_CUTOFF: f64 = 1e-18;
/// `1 − F_Z` below which `F_Z` is treated as exactly one.
const PRODUCT_SATURATION: f64 = 1e-17;

/// `(1 − F_Z)`-saturation point on the unit product scale: smallest `t` on a
/// doubling ladder with `P(G₁G₂ > t) < PRODUCT_SATURATION`.
fn product_saturation_arg(mu1: f64, mu2: f64) -> Result<f64> {
    let mut t = (mu1 * mu2).max(1.0);
    loop {
        let p = product_gamma_cdf(mu1, mu2, t, &Accuracy::default())?;
        if p.ccdf < PRODUCT_SATURATION {
            return Ok(t);
        }
        t *= 2.0;
    }
}

/// Smallest `g` with `P(G_μ > g) < LBI_TAIL_CUTOFF`.
fn gamma_tail_cap(mu: f64) -> Result<f64> {
    let mut g = mu + 10.0;
    while reg_gamma_pair(mu, g)?.1 >= LBI_TAIL_CUTOFF {
        g *= 1.5;
    }
    Ok(g)
}

/// `∫_{v_lo}^{v_hi} F_Z(ν(β₃v + β₄)/(β₁ − β₂νv)) f_V(v) dv` for
/// `0 ≤ v_lo ≤ v_hi ≤ 1/(κν)`.
///
/// The argument of `F_Z` grows without bound as `v → 1/(κν)`. Beyond the
/// point where it saturates `F_Z` to one, the integral is the LBI mass
/// `F_V(v_hi) − F_V(v_sat)` in closed form. Below it, the integral runs over
/// `s = g^{μ₃}` with `g = λ₃ v^{α₃/2}` the unit gamma variate of the LBI
/// power, which absorbs the `g^{μ₃−1}` behaviour of the density at the
/// origin; it is split where the argument of `F_Z` crosses the median scale
/// of the product and truncated where the gamma tail is negligible.
pub fn af_partial_integral(
    cfg: &SystemConfig,
    v_lo: f64,
    v_hi: f64,
    q: &QuadratureSettings,
) -> Result<crate::quad::QuadResult> {
    q.validate()?;
    let pp = cfg.product_params();
    let alpha = equal_alpha(&pp)?;
    let k = derive_constants(cfg);
    let v_star = lbi_threshold(&k);
    if !(0.0 <= v_lo && v_lo <= v_hi && v_hi <= v_star) {
        return Err(Error::domain(
            "af_partial_integral",
            format!("need 0 <= {v_lo} <= {v_hi} <= {v_star}"),
        ));
    }
    let AlphaMuParams { alpha: a3, mu: mu3, .. } = cfg.lbi_fading;
    let lam3 = k.lambda3;
    let (mu1, mu2) = (pp.hop1.mu, pp.hop2.mu);

    // v at which the F_Z argument reaches z: ν(β₃v + β₄) = z(β₁ − β₂νv)
    let v_at = |z: f64| ((z * k.beta1 - k.nu * k.beta4) / (k.nu * (k.beta3 + z * k.beta2))).clamp(0.0, v_star);
    // z at which the unit product argument λ₁λ₂ z^{α/2} equals t
    let z_at = |t: f64| (t / (k.lambda1 * k.lambda2)).powf(2.0 / alpha);
    let v_sat = v_at(z_at(product_saturation_arg(mu1, mu2)?)).clamp(v_lo, v_hi);
    let v_med = v_at(z_at(mu1 * mu2)).clamp(v_lo, v_sat);

    // closed-form part on [v_sat, v_hi], from whichever tail is smaller
    let to_g = |v: f64| lam3 * v.powf(0.5 * a3);
    let (p_sat, q_sat) = reg_gamma_pair(mu3, to_g(v_sat))?;
    let (p_hi, q_hi) = reg_gamma_pair(mu3, to_g(v_hi))?;
    let saturated = if p_hi < 0.5 { p_hi - p_sat } else { q_sat - q_hi }.max(0.0);

    let g_cap = gamma_tail_cap(mu3)?;
    let norm = ln_gamma_pos(mu3 + 1.0);
    let failure: Cell<Option<Error>> = Cell::new(None);
    let integrand = |s: f64| -> f64 {
        let g = s.powf(1.0 / mu3);
        let v = (g / lam3).powf(2.0 / a3);
        let den = k.beta1 - k.beta2 * k.nu * v;
        let f_z = if den <= 0.0 {
            1.0
        } else {
            let z = k.nu * (k.beta3 * v + k.beta4) / den;
            match product_cdf(&pp, alpha, &k, z) {
                Ok((f, _, _)) => f,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        };
        f_z * (-g - norm).exp()
    };

    let mut total = crate::quad::QuadResult {
        value: saturated,
        error: PRODUCT_SATURATION,
        evaluations: 0,
        converged: true,
    };
    for (a, b) in [(v_lo, v_med), (v_med, v_sat)] {
        let (ga, gb) = (to_g(a), to_g(b).min(g_cap));
        if !(gb > ga) {
            continue;
        }
        let r = integrate(&integrand, ga.powf(mu3), gb.powf(mu3), q);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.converged &= r.converged;
        if to_g(b) > g_cap {
            total.error += LBI_TAIL_CUTOFF;
        }
    }
    Ok(total)
}

pub fn outage_af(cfg: &SystemConfig, q: &QuadratureSettings) -> Result<OutageResult> {
    cfg.validate()?;
    equal_alpha(&cfg.product_params())?;
    let k = derive_constants(cfg);
    let v_star = lbi_threshold(&k);
    let (_, q_v) = cdf_power_pair(&cfg.lbi_fading, v_star)?;
    let r = af_partial_integral(cfg, 0.0, v_star, q)?;
    let value = (q_v + r.value).clamp(0.0, 1.0);
    let numeric_error = r.error + SPECFUN_ERROR;
    if !r.converged {
        return Err(Error::Convergence {
            func: "outage_af",
            value,
            error_estimate: numeric_error,
        });
    }
    Ok(OutageResult {
        value,
        method: OutageMethod::AfAnalytic,
        numeric_error,
    })
}

/// Common limit of both modes as `P_S → ∞`: only the relay's
/// signal-to-LBI ratio remains, `P = 1 − F_V(1/(κν))`.
pub fn outage_high_snr(cfg: &SystemConfig) -> Result<OutageResult> {
    cfg.validate()?;
    let k = derive_constants(cfg);
    let (_, q_v) = cdf_power_pair(&cfg.lbi_fading, lbi_threshold(&k))?;
    Ok(OutageResult {
        value: q_v,
        method: OutageMethod::HighSnr,
        numeric_error: SPECFUN_ERROR,
    })
}

/// DF outage through the quadrature route of the product CDF; used to
/// cross-check [`outage_df`] independently of the Meijer evaluator.
pub fn outage_df_by_quadrature(cfg: &SystemConfig) -> Result<f64> {
    cfg.validate()?;
    let k = derive_constants(cfg);
    let (p_v, q_v) = cdf_power_pair(&cfg.lbi_fading, lbi_threshold(&k))?;
    let f_z = crate::fading::cdf_product(&cfg.product_params(), df_product_threshold(cfg, &k), CdfRoute::Quadrature)?;
    Ok(q_v + p_v * f_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{cdf_power, cdf_product};
    use crate::presets;
    use crate::specfun::bessel_k;

    fn rayleigh(ps: f64, rate: f64) -> SystemConfig {
        SystemConfig {
            source_power: ps,
            target_rate: rate,
            ..presets::rayleigh()
        }
    }

    #[test]
    fn df_rayleigh_closed_form() {
        let cfg = rayleigh(1.0, 1.0);
        let k = derive_constants(&cfg);
        let c = df_product_threshold(&cfg, &k);
        assert!((c - 0.1875).abs() < 1e-15);
        let expected = 1.0 - (1.0 - (-1.0f64 / 3.0).exp()) * 2.0 * c.sqrt() * bessel_k(1.0, 2.0 * c.sqrt()).unwrap();
        let got = outage_df(&cfg).unwrap();
        assert!((got.value - expected).abs() < 1e-12, "{} vs {expected}", got.value);
        assert!((outage_df_by_quadrature(&cfg).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn high_snr_rayleigh() {
        let r = outage_high_snr(&rayleigh(1.0, 1.0)).unwrap();
        assert!((r.value - (-1.0f64 / 3.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn rate_limits() {
        for cfg in [rayleigh(1.0, 1e-9), presets::nakagami().with_rate(1e-9)] {
            assert!(outage_df(&cfg).unwrap().value < 1e-6);
            assert!(outage_af(&cfg, &QuadratureSettings::default()).unwrap().value < 1e-6);
            assert!(outage_high_snr(&cfg).unwrap().value < 1e-12);
        }
        let cfg = rayleigh(10.0, 40.0);
        assert!(outage_df(&cfg).unwrap().value > 1.0 - 1e-6);
        assert!(outage_af(&cfg, &QuadratureSettings::default()).unwrap().value > 1.0 - 1e-6);
    }

    #[test]
    fn af_at_least_df() {
        for base in [presets::rayleigh(), presets::weibull(), presets::nakagami()] {
            for ps in [1.0, 10.0] {
                for i in 1..=12 {
                    let cfg = SystemConfig {
                        source_power: ps,
                        target_rate: 0.5 * i as f64,
                        ..base
                    };
                    let df = outage_df(&cfg).unwrap();
                    let af = outage_af(&cfg, &QuadratureSettings::default()).unwrap();
                    assert!(
                        df.value <= af.value + 1e-9 + af.numeric_error,
                        "{cfg:?}: df {} af {}",
                        df.value,
                        af.value
                    );
                    let hs = outage_high_snr(&cfg).unwrap().value;
                    assert!(hs <= df.value + 1e-12);
                }
            }
        }
    }

    #[test]
    fn monotone_in_rate_and_power() {
        let q = QuadratureSettings::default();
        for base in [presets::rayleigh(), presets::weibull(), presets::nakagami()] {
            let mut prev = (0.0, 0.0);
            for i in 1..=16 {
                let cfg = base.with_rate(0.4 * i as f64);
                let df = outage_df(&cfg).unwrap().value;
                let af = outage_af(&cfg, &q).unwrap().value;
                assert!(df >= prev.0 - 1e-12 && af >= prev.1 - 1e-9, "rate {}", cfg.target_rate);
                prev = (df, af);
            }
            let mut prev = (1.0, 1.0);
            for e in -1..=5 {
                let cfg = SystemConfig {
                    source_power: 10f64.powi(e),
                    ..base
                };
                let df = outage_df(&cfg).unwrap().value;
                let af = outage_af(&cfg, &q).unwrap().value;
                assert!(df <= prev.0 + 1e-12 && af <= prev.1 + 1e-9, "power {}", cfg.source_power);
                prev = (df, af);
            }
        }
    }

    #[test]
    fn af_endpoint_tail_is_lbi_mass() {
        let q = QuadratureSettings::reference();
        for cfg in [rayleigh(1.0, 1.0), presets::weibull(), presets::nakagami().with_rate(2.0)] {
            let v_star = lbi_threshold(&derive_constants(&cfg));
            for eps in [1e-4, 1e-6, 1e-8] {
                let lo = v_star * (1.0 - eps);
                let tail = af_partial_integral(&cfg, lo, v_star, &q).unwrap().value;
                let mass = cdf_power(&cfg.lbi_fading, v_star).unwrap() - cdf_power(&cfg.lbi_fading, lo).unwrap();
                assert!((tail - mass).abs() < 1e-9, "eps={eps}: {tail} vs {mass}");
            }
        }
    }

    #[test]
    fn vanishing_lbi_reduces_df_to_product_cdf() {
        let mut cfg = presets::nakagami().with_rate(2.0);
        cfg.lbi_fading.r_hat = 1e-4;
        let k = derive_constants(&cfg);
        let f_z = cdf_product(&cfg.product_params(), df_product_threshold(&cfg, &k), CdfRoute::Meijer).unwrap();
        let df = outage_df(&cfg).unwrap().value;
        assert!((df - f_z).abs() < 1e-12, "{df} vs {f_z}");
        assert!(outage_high_snr(&cfg).unwrap().value < 1e-12);
    }

    #[test]
    fn alpha_mismatch_rejected() {
        let mut cfg = presets::rayleigh();
        cfg.hop2_fading.alpha = 3.0;
        assert!(matches!(outage_df(&cfg), Err(Error::AlphaMismatch { .. })));
        assert!(matches!(
            outage_af(&cfg, &QuadratureSettings::default()),
            Err(Error::AlphaMismatch { .. })
        ));
        // the asymptote does not involve the hops
        assert!(outage_high_snr(&cfg).is_ok());
    }

    #[test]
    fn high_snr_coincidence() {
        let q = QuadratureSettings::default();
        let cfg = |ps: f64| rayleigh(ps, 1.0);
        let hs = outage_high_snr(&cfg(1.0)).unwrap().value;
        let mut prev = (f64::INFINITY, f64::INFINITY);
        for ps in [1e3, 1e4, 1e6] {
            let d_df = (outage_df(&cfg(ps)).unwrap().value - hs).abs();
            let d_af = (outage_af(&cfg(ps), &q).unwrap().value - hs).abs();
            assert!(d_df < prev.0 && d_af < prev.1);
            prev = (d_df, d_af);
        }
        assert!(prev.0 < 1e-3 && prev.1 < 1e-3);
    }

    #[test]
    fn concentrated_lbi_law_matches_simulation() {
        // λ₃ ≈ 2.5e6: the LBI gamma law occupies a tiny corner of [0, v*]
        let mut cfg = presets::with_family(4.0, 2.0, 0.03).with_rate(2.5);
        cfg.lbi_fading.r_hat = 0.03;
        let df = outage_df(&cfg).unwrap().value;
        let af = outage_af(&cfg, &QuadratureSettings::default()).unwrap().value;
        let (m_df, m_af) = crate::mcsim::simulate_both(&cfg, 400_000, 17).unwrap();
        let sd = |p: f64| (p * (1.0 - p) / 400_000.0).sqrt();
        assert!((m_df.p_hat - df).abs() < 4.0 * sd(df), "df {df} mc {}", m_df.p_hat);
        assert!((m_af.p_hat - af).abs() < 4.0 * sd(af), "af {af} mc {}", m_af.p_hat);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]

        #[test]
        fn af_dominates_df_everywhere(
            alpha in 1.0f64..4.0,
            mu in 0.5f64..4.0,
            lbi_r_hat in 0.01f64..3.0,
            rate in 0.1f64..5.0,
            log_ps in -1.0f64..4.0,
        ) {
            let mut cfg = presets::with_family(alpha, mu, lbi_r_hat).with_rate(rate);
            cfg.source_power = 10f64.powf(log_ps);
            let df = outage_df(&cfg).unwrap();
            let af = outage_af(&cfg, &QuadratureSettings::default()).unwrap();
            let hs = outage_high_snr(&cfg).unwrap();
            proptest::prop_assert!(df.value <= af.value + 1e-9 + af.numeric_error, "df {} af {}", df.value, af.value);
            proptest::prop_assert!(hs.value <= df.value + 1e-12);
        }
    }
}
