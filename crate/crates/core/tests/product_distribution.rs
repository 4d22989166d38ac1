//! Cross-checks of the product-of-powers distribution against independent
//! oracles: direct Mellin convolution of the two power densities, finite
//! differences of the CDF, and the two CDF evaluation routes against each
//! other.

use alphamu_relay::fading::{cdf_product, cdf_product_pair, pdf_power, pdf_product};
use alphamu_relay::quad::{integrate_to_infinity, QuadratureSettings};
use alphamu_relay::specfun::{bessel_k, meijer_g_2131, product_cdf_parameters, ln_gamma};
use alphamu_relay::{AlphaMuParams, CdfRoute, ProductDistParams};
use proptest::prelude::*;

const MUS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.5];
const ALPHAS: [f64; 3] = [1.0, 2.0, 3.0];

fn pair(alpha: f64, mu1: f64, mu2: f64) -> ProductDistParams {
    ProductDistParams::new(
        AlphaMuParams::new(alpha, mu1, 1.0).unwrap(),
        AlphaMuParams::new(alpha, mu2, 1.0).unwrap(),
    )
    .unwrap()
}

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n).map(|i| lo * 10f64.powf(decades * i as f64 / n as f64)).collect()
}

#[test]
fn meijer_and_quadrature_routes_agree_on_grid() {
    let zs = log_grid(1e-6, 1e3, 4);
    let mut worst = 0.0f64;
    for &alpha in &ALPHAS {
        for &mu1 in &MUS {
            for &mu2 in &MUS {
                let pp = pair(alpha, mu1, mu2);
                for &z in &zs {
                    let m = cdf_product(&pp, z, CdfRoute::Meijer).unwrap();
                    let q = cdf_product(&pp, z, CdfRoute::Quadrature).unwrap();
                    let d = (m - q).abs();
                    worst = worst.max(d);
                    assert!(d <= 1e-7, "alpha={alpha} mu=({mu1},{mu2}) z={z}: meijer {m} quad {q}");
                }
            }
        }
    }
    println!("max |meijer - quadrature| = {worst:e}");
}

#[test]
fn rayleigh_product_matches_bessel_closed_form() {
    let pp = pair(2.0, 1.0, 1.0);
    for &z in &log_grid(1e-6, 1e3, 5) {
        let closed = 1.0 - 2.0 * z.sqrt() * bessel_k(1.0, 2.0 * z.sqrt()).unwrap();
        let m = cdf_product(&pp, z, CdfRoute::Meijer).unwrap();
        assert!((m - closed).abs() <= 1e-9, "z={z}: {m} vs {closed}");
    }
}

/// Mellin convolution `∫ f_X(u) f_Y(z/u) du/u`, integrated in `w = ln u`.
fn convolution_oracle(pp: &ProductDistParams, z: f64) -> f64 {
    let s = QuadratureSettings::reference();
    let f = |w: f64| {
        let u = w.exp();
        let a = pdf_power(&pp.hop1, u).unwrap_or(0.0);
        let b = pdf_power(&pp.hop2, z / u).unwrap_or(0.0);
        a * b
    };
    // split the real line at ln √z
    let c = 0.5 * z.ln();
    let right = integrate_to_infinity(|t| f(c + t), 0.0, &s).value;
    let left = integrate_to_infinity(|t| f(c - t), 0.0, &s).value;
    right + left
}

#[test]
fn density_matches_mellin_convolution() {
    for &(alpha, mu1, r1, mu2, r2) in &[
        (2.0, 1.0, 1.0, 1.0, 1.0),
        (2.0, 2.0, 1.0, 1.0, 0.7),
        (3.0, 1.5, 1.2, 0.5, 1.0),
        (1.0, 3.5, 2.0, 2.0, 1.0),
        (2.5, 0.8, 0.5, 4.0, 1.5),
    ] {
        let pp = ProductDistParams::new(
            AlphaMuParams::new(alpha, mu1, r1).unwrap(),
            AlphaMuParams::new(alpha, mu2, r2).unwrap(),
        )
        .unwrap();
        for &z in &[0.01, 0.2, 1.0, 3.0] {
            let oracle = convolution_oracle(&pp, z);
            let got = pdf_product(&pp, z).unwrap();
            assert!(
                (got - oracle).abs() <= 1e-8 * oracle.max(1.0),
                "{pp:?} z={z}: {got} vs {oracle}"
            );
        }
    }
}

#[test]
fn density_integrates_to_one() {
    let s = QuadratureSettings::reference();
    for &alpha in &ALPHAS {
        for &(mu1, mu2) in &[(0.5, 0.5), (1.0, 3.5), (2.0, 1.5)] {
            let pp = pair(alpha, mu1, mu2);
            // t = z^{α/2} then t = w²
            let total = integrate_to_infinity(
                |w| {
                    let t = w * w;
                    let z = t.powf(2.0 / alpha);
                    let dz_dw = 2.0 * w * (2.0 / alpha) * z / t;
                    if z > 0.0 {
                        pdf_product(&pp, z).unwrap() * dz_dw
                    } else {
                        0.0
                    }
                },
                0.0,
                &s,
            )
            .value;
            assert!((total - 1.0).abs() < 1e-8, "alpha={alpha} mu=({mu1},{mu2}): {total}");
        }
    }
}

#[test]
fn cdf_derivative_matches_density() {
    for &alpha in &ALPHAS {
        for &(mu1, mu2) in &[(1.0, 1.0), (2.0, 1.0), (0.5, 3.5), (1.5, 1.5)] {
            let pp = pair(alpha, mu1, mu2);
            for &z in &[0.05, 0.3, 1.0, 4.0] {
                let h = f64::EPSILON.sqrt() * z;
                let fp = cdf_product(&pp, z + h, CdfRoute::Meijer).unwrap();
                let fm = cdf_product(&pp, z - h, CdfRoute::Meijer).unwrap();
                let deriv = (fp - fm) / (2.0 * h);
                let pdf = pdf_product(&pp, z).unwrap();
                assert!(
                    (deriv - pdf).abs() <= 1e-6 * (1.0 + pdf.abs()),
                    "alpha={alpha} mu=({mu1},{mu2}) z={z}: {deriv} vs {pdf}"
                );
            }
        }
    }
}

#[test]
fn assembled_meijer_form_equals_cdf() {
    // F_Z(z) = (λ₁λ₂)^{(μ₁+μ₂)/2} z^{α(μ₁+μ₂)/4} G(λ₁λ₂ z^{α/2}) / (Γ(μ₁)Γ(μ₂))
    for &(alpha, mu1, mu2, z) in &[(2.0f64, 2.0, 1.0, 0.3f64), (2.0, 1.0, 1.0, 0.1875), (3.0, 1.5, 0.5, 2.0)] {
        let pp = pair(alpha, mu1, mu2);
        let lam = pp.hop1.lambda().value() * pp.hop2.lambda().value();
        let (a1, b) = product_cdf_parameters(mu1, mu2);
        let half_sum = 0.5 * (mu1 + mu2);
        let g = meijer_g_2131(a1, b, lam * z.powf(0.5 * alpha)).unwrap();
        let assembled = (half_sum * lam.ln() + 0.5 * alpha * half_sum * z.ln()
            - ln_gamma(mu1).unwrap()
            - ln_gamma(mu2).unwrap())
        .exp()
            * g;
        let f = cdf_product(&pp, z, CdfRoute::Meijer).unwrap();
        assert!((assembled - f).abs() < 1e-12, "{assembled} vs {f}");
        let q = cdf_product(&pp, z, CdfRoute::Quadrature).unwrap();
        assert!((assembled - q).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_cdf_is_a_cdf(alpha in 0.8f64..4.0, mu1 in 0.5f64..8.0, mu2 in 0.5f64..8.0,
                            mut zs in prop::collection::vec(-12.0f64..8.0, 2..12)) {
        let pp = pair(alpha, mu1, mu2);
        zs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut prev = 0.0;
        for lz in zs {
            let (f, q) = cdf_product_pair(&pp, lz.exp(), CdfRoute::Meijer).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!((f + q - 1.0).abs() < 1e-12);
            prop_assert!(f >= prev - 1e-12);
            prev = f;
        }
    }
}
