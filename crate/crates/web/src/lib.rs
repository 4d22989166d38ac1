//! Browser bindings: outage curves over the target rate and over α, and a
//! Monte Carlo spot check against the analytic values.
//!
//! The plain functions return serializable structs so they can be exercised
//! natively; the `#[wasm_bindgen]` wrappers only convert.

use alphamu_relay::mcsim::simulate_both;
use alphamu_relay::outage::{outage_af, outage_df, outage_high_snr};
use alphamu_relay::{presets, McEstimate, QuadratureSettings, SystemConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Browser sweeps are capped so one call stays interactive.
const MAX_POINTS: usize = 200;
const MAX_SAMPLES: u64 = 2_000_000;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub df: Vec<f64>,
    pub af: Vec<f64>,
    /// Rate curves only: the high-SNR floor at each rate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high_snr: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct SpotCheck {
    pub df_analytic: f64,
    pub af_analytic: f64,
    pub df: McEstimate,
    pub af: McEstimate,
}

fn base(preset: &str, power: f64, lbi_r_hat: f64) -> Result<SystemConfig, String> {
    let mut cfg = presets::by_name(preset).map_err(|e| e.to_string())?;
    cfg.source_power = power;
    cfg.lbi_fading.r_hat = lbi_r_hat;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(format!("bad range {start}:{stop}:{step}"));
    }
    let n = ((stop - start) / step + 0.5).floor() as usize + 1;
    if n > MAX_POINTS {
        return Err(format!("{n} points requested, at most {MAX_POINTS}"));
    }
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

fn both(cfg: &SystemConfig) -> Result<(f64, f64), String> {
    let df = outage_df(cfg).map_err(|e| e.to_string())?.value;
    let af = match outage_af(cfg, &QuadratureSettings::default()) {
        Ok(r) => r.value,
        // a best-effort value is still worth plotting
        Err(alphamu_relay::Error::Convergence { value, .. }) => value,
        Err(e) => return Err(e.to_string()),
    };
    Ok((df, af))
}

pub fn rate_curve(preset: &str, power: f64, lbi_r_hat: f64, start: f64, stop: f64, step: f64) -> Result<Curve, String> {
    let cfg = base(preset, power, lbi_r_hat)?;
    let x = grid(start, stop, step)?;
    let (mut df, mut af, mut hs) = (Vec::new(), Vec::new(), Vec::new());
    for &r in &x {
        let c = cfg.with_rate(r);
        c.validate().map_err(|e| e.to_string())?;
        let (d, a) = both(&c)?;
        df.push(d);
        af.push(a);
        hs.push(outage_high_snr(&c).map_err(|e| e.to_string())?.value);
    }
    Ok(Curve {
        x,
        df,
        af,
        high_snr: Some(hs),
    })
}

/// OP against α with every branch set to `(α, μ)`.
pub fn alpha_curve(mu: f64, power: f64, rate: f64, lbi_r_hat: f64, start: f64, stop: f64, step: f64) -> Result<Curve, String> {
    let cfg = base("rayleigh", power, lbi_r_hat)?.with_rate(rate);
    let x = grid(start, stop, step)?;
    let (mut df, mut af) = (Vec::new(), Vec::new());
    for &alpha in &x {
        let c = cfg.with_all_alpha_mu(alpha, mu);
        c.validate().map_err(|e| e.to_string())?;
        let (d, a) = both(&c)?;
        df.push(d);
        af.push(a);
    }
    Ok(Curve {
        x,
        df,
        af,
        high_snr: None,
    })
}

pub fn spot_check(preset: &str, power: f64, rate: f64, lbi_r_hat: f64, samples: u64, seed: u64) -> Result<SpotCheck, String> {
    if samples > MAX_SAMPLES {
        return Err(format!("at most {MAX_SAMPLES} samples in the browser"));
    }
    let cfg = base(preset, power, lbi_r_hat)?.with_rate(rate);
    cfg.validate().map_err(|e| e.to_string())?;
    let (df_analytic, af_analytic) = both(&cfg)?;
    let (df, af) = simulate_both(&cfg, samples, seed).map_err(|e| e.to_string())?;
    Ok(SpotCheck {
        df_analytic,
        af_analytic,
        df,
        af,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<JsValue, JsError> {
    let v = r.map_err(|e| JsError::new(&e))?;
    serde_wasm_bindgen::to_value(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = rateCurve)]
pub fn rate_curve_js(preset: &str, power: f64, lbi_r_hat: f64, start: f64, stop: f64, step: f64) -> Result<JsValue, JsError> {
    to_js(rate_curve(preset, power, lbi_r_hat, start, stop, step))
}

#[wasm_bindgen(js_name = alphaCurve)]
pub fn alpha_curve_js(mu: f64, power: f64, rate: f64, lbi_r_hat: f64, start: f64, stop: f64, step: f64) -> Result<JsValue, JsError> {
    to_js(alpha_curve(mu, power, rate, lbi_r_hat, start, stop, step))
}

/// `samples` and `seed` arrive as JS numbers.
#[wasm_bindgen(js_name = spotCheck)]
pub fn spot_check_js(preset: &str, power: f64, rate: f64, lbi_r_hat: f64, samples: f64, seed: f64) -> Result<JsValue, JsError> {
    if !(samples >= 0.0 && seed >= 0.0) {
        return Err(JsError::new("samples and seed must be non-negative"));
    }
    to_js(spot_check(preset, power, rate, lbi_r_hat, samples as u64, seed as u64))
}
