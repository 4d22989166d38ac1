//! The evaluation scenarios: three fading families on all branches, with
//! `d₁ = d₂ = 5 m`, `m₁ = m₂ = 2`, `σ_R = σ_D = 0.01`, `θ = 1`, `η = 0.5`,
//! `P_S = 1 W` and `ℛ = 1`.
//!
//! The relay noise power `σ_R² = 10⁻⁴` is split evenly between the antenna
//! and conversion stages. The LBI branch uses the same family as the hops
//! with `r̂₃ = 1`.

use crate::error::{Error, Result};
use crate::fading::AlphaMuParams;
use crate::relaysys::SystemConfig;

pub const NAMES: [&str; 3] = ["rayleigh", "weibull", "nakagami"];

pub fn with_family(alpha: f64, mu: f64, lbi_r_hat: f64) -> SystemConfig {
    let hop = AlphaMuParams {
        alpha,
        mu,
        r_hat: 1.0,
    };
    SystemConfig {
        source_power: 1.0,
        hop1_distance: 5.0,
        hop2_distance: 5.0,
        hop1_pathloss: 2.0,
        hop2_pathloss: 2.0,
        hop1_fading: hop,
        hop2_fading: hop,
        lbi_fading: AlphaMuParams {
            r_hat: lbi_r_hat,
            ..hop
        },
        noise_antenna_var: 5e-5,
        noise_conversion_var: 5e-5,
        noise_dest_var: 1e-4,
        eh_efficiency: 1.0,
        eh_time_fraction: 0.5,
        target_rate: 1.0,
        block_time: 1.0,
    }
}

pub fn rayleigh() -> SystemConfig {
    with_family(2.0, 1.0, 1.0)
}

pub fn weibull() -> SystemConfig {
    with_family(3.0, 1.0, 1.0)
}

pub fn nakagami() -> SystemConfig {
    with_family(2.0, 2.0, 1.0)
}

pub fn by_name(name: &str) -> Result<SystemConfig> {
    match name {
        "rayleigh" => Ok(rayleigh()),
        "weibull" => Ok(weibull()),
        "nakagami" => Ok(nakagami()),
        _ => Err(Error::invalid(
            "preset",
            format!("unknown preset `{name}` (expected one of {})", NAMES.join(", ")),
        )),
    }
}

impl SystemConfig {
    pub fn with_rate(self, target_rate: f64) -> Self {
        Self { target_rate, ..self }
    }
}
