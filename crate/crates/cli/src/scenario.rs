use std::fmt;
use std::path::Path;
use std::str::FromStr;

use alphamu_relay::SystemConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    TargetRate,
    SourcePower,
    /// α on all three fading branches.
    Alpha,
    /// μ on all three fading branches.
    Mu,
    EhTimeFraction,
}

impl SweepParam {
    pub fn apply(self, cfg: &SystemConfig, value: f64) -> SystemConfig {
        let mut cfg = *cfg;
        match self {
            SweepParam::TargetRate => cfg.target_rate = value,
            SweepParam::SourcePower => cfg.source_power = value,
            SweepParam::Alpha => {
                for p in [&mut cfg.hop1_fading, &mut cfg.hop2_fading, &mut cfg.lbi_fading] {
                    p.alpha = value;
                }
            }
            SweepParam::Mu => {
                for p in [&mut cfg.hop1_fading, &mut cfg.hop2_fading, &mut cfg.lbi_fading] {
                    p.mu = value;
                }
            }
            SweepParam::EhTimeFraction => cfg.eh_time_fraction = value,
        }
        cfg
    }

    pub fn current(self, cfg: &SystemConfig) -> f64 {
        match self {
            SweepParam::TargetRate => cfg.target_rate,
            SweepParam::SourcePower => cfg.source_power,
            SweepParam::Alpha => cfg.hop1_fading.alpha,
            SweepParam::Mu => cfg.hop1_fading.mu,
            SweepParam::EhTimeFraction => cfg.eh_time_fraction,
        }
    }
}

/// `start:stop:step`, both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err("sweep bounds must be finite".into());
        }
        if !(self.step > 0.0) {
            return Err(format!("sweep step {} must be > 0", self.step));
        }
        if self.stop < self.start {
            return Err(format!("sweep stop {} is below start {}", self.stop, self.start));
        }
        Ok(())
    }

    /// `start + k·step` for every `k` whose point lies within half a step
    /// of `[start, stop]`.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 0.5).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected start:stop:step, got `{s}`"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let r = Range {
            start: num(a)?,
            stop: num(b)?,
            step: num(c)?,
        };
        r.validate()?;
        Ok(r)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParam,
    #[serde(flatten)]
    pub range: Range,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    pub config: SystemConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
}

impl Scenario {
    /// The `(sweep value, config)` points; without a sweep, a single point
    /// labelled with the target rate.
    pub fn points(&self) -> Vec<(f64, SystemConfig)> {
        match self.sweep {
            None => vec![(self.config.target_rate, self.config)],
            Some(s) => s
                .range
                .values()
                .into_iter()
                .map(|v| (v, s.parameter.apply(&self.config, v)))
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.config.validate().map_err(|e| CliError::Config(format!("scenario `{}`: {e}", self.id)))?;
        if let Some(s) = self.sweep {
            s.range.validate().map_err(CliError::Config)?;
            for (v, cfg) in self.points() {
                cfg.validate().map_err(|e| {
                    CliError::Config(format!("scenario `{}`: sweep value {v} out of domain: {e}", self.id))
                })?;
            }
        }
        Ok(())
    }
}

/// A scenario read from disk, with the non-fatal findings of the load.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub scenario: Scenario,
    pub warnings: Vec<String>,
}

pub fn load_scenario(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_scenario(text: &str) -> Result<Loaded, CliError> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    let mut warnings = Vec::new();
    let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    if raw["config"].get("eh_time_fraction").is_none() {
        warnings.push(format!(
            "scenario `{}`: eh_time_fraction not given, using {}",
            scenario.id, scenario.config.eh_time_fraction
        ));
    }
    scenario.validate()?;
    Ok(Loaded { scenario, warnings })
}
