//! The time-switching energy-harvesting full-duplex relay: configuration,
//! per-scenario constants and the per-draw SNR chain.
//!
//! A fraction `η` of each block of length `T` is spent harvesting energy
//! from the source; the relay then forwards with all of the harvested
//! energy over the remaining `(1 − η)T`. Its own transmission leaks back
//! into its receiver through the residual loop-back interference (LBI)
//! channel `h₃`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{AlphaMuParams, ProductDistParams};

fn default_eta() -> f64 {
    0.5
}

fn default_block_time() -> f64 {
    1.0
}

/// A complete relay scenario. Powers and noise variances are in watts,
/// distances in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub source_power: f64,
    pub hop1_distance: f64,
    pub hop2_distance: f64,
    pub hop1_pathloss: f64,
    pub hop2_pathloss: f64,
    pub hop1_fading: AlphaMuParams,
    pub hop2_fading: AlphaMuParams,
    /// Residual loop-back interference channel after cancellation.
    pub lbi_fading: AlphaMuParams,
    /// σ_a², receive-antenna noise at the relay.
    pub noise_antenna_var: f64,
    /// σ_c², noise of the relay's information receiver.
    pub noise_conversion_var: f64,
    /// σ_D², destination noise.
    pub noise_dest_var: f64,
    /// Energy conversion efficiency θ.
    pub eh_efficiency: f64,
    /// Harvesting fraction η of the block.
    #[serde(default = "default_eta")]
    pub eh_time_fraction: f64,
    /// Target rate ℛ in bits/s/Hz.
    pub target_rate: f64,
    #[serde(default = "default_block_time")]
    pub block_time: f64,
}

fn require(field: &'static str, ok: bool, v: f64, what: &str) -> Result<()> {
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} {what}")))
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        require("source_power", self.source_power > 0.0, self.source_power, "must be > 0")?;
        require("hop1_distance", self.hop1_distance > 0.0, self.hop1_distance, "must be > 0")?;
        require("hop2_distance", self.hop2_distance > 0.0, self.hop2_distance, "must be > 0")?;
        require("hop1_pathloss", self.hop1_pathloss >= 0.0, self.hop1_pathloss, "must be >= 0")?;
        require("hop2_pathloss", self.hop2_pathloss >= 0.0, self.hop2_pathloss, "must be >= 0")?;
        self.hop1_fading.validate()?;
        self.hop2_fading.validate()?;
        self.lbi_fading.validate()?;
        require("noise_antenna_var", self.noise_antenna_var > 0.0, self.noise_antenna_var, "must be > 0")?;
        require(
            "noise_conversion_var",
            self.noise_conversion_var > 0.0,
            self.noise_conversion_var,
            "must be > 0",
        )?;
        require("noise_dest_var", self.noise_dest_var > 0.0, self.noise_dest_var, "must be > 0")?;
        require(
            "eh_efficiency",
            self.eh_efficiency > 0.0 && self.eh_efficiency <= 1.0,
            self.eh_efficiency,
            "must lie in (0, 1]",
        )?;
        require(
            "eh_time_fraction",
            self.eh_time_fraction > 0.0 && self.eh_time_fraction < 1.0,
            self.eh_time_fraction,
            "must lie in (0, 1)",
        )?;
        require("target_rate", self.target_rate > 0.0, self.target_rate, "must be > 0")?;
        require("block_time", self.block_time > 0.0, self.block_time, "must be > 0")?;
        Ok(())
    }

    /// Total relay noise σ_R² = σ_a² + σ_c².
    pub fn noise_relay_var(&self) -> f64 {
        self.noise_antenna_var + self.noise_conversion_var
    }

    /// Large-scale attenuation of the first hop, `d₁^{m₁}`.
    pub fn hop1_attenuation(&self) -> f64 {
        self.hop1_distance.powf(self.hop1_pathloss)
    }

    pub fn hop2_attenuation(&self) -> f64 {
        self.hop2_distance.powf(self.hop2_pathloss)
    }

    /// The two hops as a product distribution (`Z = h₁² h₂²`).
    pub fn product_params(&self) -> ProductDistParams {
        ProductDistParams {
            hop1: self.hop1_fading,
            hop2: self.hop2_fading,
        }
    }

    /// Same family on all three branches with the given `(α, μ)`; the hop
    /// `r̂` values are kept.
    pub fn with_all_alpha_mu(mut self, alpha: f64, mu: f64) -> Self {
        for p in [&mut self.hop1_fading, &mut self.hop2_fading, &mut self.lbi_fading] {
            p.alpha = alpha;
            p.mu = mu;
        }
        self
    }
}

/// Constants that every analytic and simulated evaluation of a scenario
/// shares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedConstants {
    /// κ = θη/(1 − η), harvested-to-source power conversion.
    pub kappa: f64,
    /// ν = 2^{ℛ/(1−η)} − 1, the outage SNR threshold.
    pub nu: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
}

pub fn kappa(cfg: &SystemConfig) -> f64 {
    cfg.eh_efficiency * cfg.eh_time_fraction / (1.0 - cfg.eh_time_fraction)
}

pub fn snr_threshold(cfg: &SystemConfig) -> f64 {
    // 2^x − 1 without cancellation for small rates
    (cfg.target_rate / (1.0 - cfg.eh_time_fraction) * std::f64::consts::LN_2).exp_m1()
}

pub fn derive_constants(cfg: &SystemConfig) -> DerivedConstants {
    let kappa = kappa(cfg);
    let beta3 = cfg.hop1_attenuation() * cfg.hop2_attenuation() * cfg.noise_relay_var();
    DerivedConstants {
        kappa,
        nu: snr_threshold(cfg),
        lambda1: cfg.hop1_fading.lambda().value(),
        lambda2: cfg.hop2_fading.lambda().value(),
        lambda3: cfg.lbi_fading.lambda().value(),
        beta1: cfg.source_power,
        beta2: kappa * cfg.source_power,
        beta3,
        beta4: beta3 / kappa,
    }
}

/// Envelope realizations of the two hops and the residual LBI channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
}

/// Energy collected during the harvesting phase; the noise contribution is
/// neglected.
pub fn harvested_energy(cfg: &SystemConfig, h1: f64) -> f64 {
    cfg.eh_efficiency * cfg.eh_time_fraction * cfg.block_time * cfg.source_power * h1 * h1
        / cfg.hop1_attenuation()
}

/// Relay transmit power: the harvested energy spent over `(1 − η)T`.
pub fn relay_power(cfg: &SystemConfig, h1: f64) -> f64 {
    kappa(cfg) * cfg.source_power * h1 * h1 / cfg.hop1_attenuation()
}

/// SNR at the relay. The relay power scales with the received source power,
/// so `P_S` and `h₁` cancel.
pub fn snr_df_relay(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    SnrModel::new(cfg).df_relay(draw)
}

pub fn snr_df_dest(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    SnrModel::new(cfg).df_dest(draw)
}

/// End-to-end DF SNR, the weaker of the two hops.
pub fn snr_df_eff(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    SnrModel::new(cfg).df_eff(draw)
}

/// AF destination SNR `β₁Z / (β₂VZ + β₃V + β₄)` with `Z = h₁²h₂²`, `V = h₃²`.
pub fn snr_af_dest(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    SnrModel::new(cfg).af(draw)
}

/// The per-draw SNR chain with all scenario constants hoisted, for inner
/// loops.
#[derive(Debug, Clone, Copy)]
pub struct SnrModel {
    k: DerivedConstants,
    /// `κ P_S / (d₁^{m₁} d₂^{m₂} σ_D²)`
    df_dest_gain: f64,
}

impl SnrModel {
    pub fn new(cfg: &SystemConfig) -> Self {
        let k = derive_constants(cfg);
        Self {
            k,
            df_dest_gain: k.kappa * cfg.source_power
                / (cfg.hop1_attenuation() * cfg.hop2_attenuation() * cfg.noise_dest_var),
        }
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.k
    }

    pub fn df_relay(&self, draw: &ChannelDraw) -> f64 {
        1.0 / (self.k.kappa * draw.h3 * draw.h3)
    }

    pub fn df_dest(&self, draw: &ChannelDraw) -> f64 {
        self.df_dest_gain * (draw.h1 * draw.h2).powi(2)
    }

    pub fn df_eff(&self, draw: &ChannelDraw) -> f64 {
        self.df_relay(draw).min(self.df_dest(draw))
    }

    pub fn af(&self, draw: &ChannelDraw) -> f64 {
        let k = &self.k;
        let z = (draw.h1 * draw.h2).powi(2);
        let v = draw.h3 * draw.h3;
        k.beta1 * z / (k.beta2 * v * z + k.beta3 * v + k.beta4)
    }
}

/// AF destination SNR written in terms of the instantaneous relay power,
/// before `P_R` is eliminated. Kept as an independent check on
/// [`snr_af_dest`].
pub fn snr_af_dest_expanded(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    let (x, y, v) = (draw.h1 * draw.h1, draw.h2 * draw.h2, draw.h3 * draw.h3);
    let (a1, a2) = (cfg.hop1_attenuation(), cfg.hop2_attenuation());
    let ps = cfg.source_power;
    let pr = relay_power(cfg, draw.h1);
    let sr = cfg.noise_relay_var();
    ps * x * y / (pr * a1 * y * v + ps * a2 * x * sr / pr + v * a1 * a2 * sr)
}

/// Amplification gain `G = 1/√(P_S h₁²/d₁^{m₁} + P_R h₃² + σ_R²)`, which
/// normalizes the relay's received power to one.
pub fn relay_gain(cfg: &SystemConfig, draw: &ChannelDraw) -> f64 {
    let received = cfg.source_power * draw.h1 * draw.h1 / cfg.hop1_attenuation()
        + relay_power(cfg, draw.h1) * draw.h3 * draw.h3
        + cfg.noise_relay_var();
    received.sqrt().recip()
}

/// Instantaneous capacity over the data phase, `(1 − η) log₂(1 + γ)`.
pub fn capacity(cfg: &SystemConfig, gamma_eff: f64) -> f64 {
    (1.0 - cfg.eh_time_fraction) * gamma_eff.ln_1p() / std::f64::consts::LN_2
}

/// Outage event; strict inequality, shared by the analytic and simulated
/// paths.
pub fn is_outage(gamma_eff: f64, nu: f64) -> bool {
    gamma_eff < nu
}
