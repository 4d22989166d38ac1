//! Monte Carlo outage estimator.
//!
//! Each estimate draws channel triples `(h₁, h₂, h₃)` from the α-μ sampler,
//! pushes them through the per-draw SNR chain and counts `γ < ν`.
//!
//! Reproducibility: samples are generated in fixed-size chunks, and chunk
//! `j` of stream `i` is a ChaCha8 generator keyed by `(seed, i, j)`. The
//! result therefore does not depend on how chunks are scheduled across
//! threads. The stream does not depend on the relaying mode either, so DF
//! and AF estimates with the same seed use common random numbers; pass
//! different seeds to decorrelate them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::EnvelopeSampler;
use crate::relaysys::{ChannelDraw, SnrModel, SystemConfig};

/// Samples per independently keyed chunk.
pub const CHUNK: u64 = 1 << 16;

/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 10_000;

/// Two-sided 95 % normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelayMode {
    Df,
    Af,
}

impl RelayMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RelayMode::Df => "df",
            RelayMode::Af => "af",
        }
    }
}

/// Simulated outage probability with a 95 % Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub p_hat: f64,
    pub n_samples: u64,
    /// `√(p̂(1 − p̂)/n)`.
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_counts(outages: u64, n: u64, seed: u64) -> Self {
        let nf = n as f64;
        let p = outages as f64 / nf;
        let z2 = Z95 * Z95;
        let centre = (p + z2 / (2.0 * nf)) / (1.0 + z2 / nf);
        let half = Z95 / (1.0 + z2 / nf) * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
        Self {
            p_hat: p,
            n_samples: n,
            stderr: (p * (1.0 - p) / nf).sqrt(),
            ci_low: (centre - half).clamp(0.0, p),
            ci_high: (centre + half).clamp(p, 1.0),
            seed,
        }
    }
}

fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&chunk.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

struct Samplers {
    h1: EnvelopeSampler,
    h2: EnvelopeSampler,
    h3: EnvelopeSampler,
}

impl Samplers {
    fn new(cfg: &SystemConfig) -> Result<Self> {
        Ok(Self {
            h1: EnvelopeSampler::new(&cfg.hop1_fading)?,
            h2: EnvelopeSampler::new(&cfg.hop2_fading)?,
            h3: EnvelopeSampler::new(&cfg.lbi_fading)?,
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> ChannelDraw {
        let h1 = self.h1.sample(rng);
        let h2 = self.h2.sample(rng);
        let h3 = self.h3.sample(rng);
        ChannelDraw { h1, h2, h3 }
    }
}

/// Outage counts `[df, af]` over one chunk.
fn count_chunk(samplers: &Samplers, snr: &SnrModel, nu: f64, mut rng: ChaCha8Rng, len: u64) -> [u64; 2] {
    let mut counts = [0u64; 2];
    for _ in 0..len {
        let d = samplers.draw(&mut rng);
        counts[0] += u64::from(snr.df_eff(&d) < nu);
        counts[1] += u64::from(snr.af(&d) < nu);
    }
    counts
}

fn validate(cfg: &SystemConfig, n: u64) -> Result<()> {
    cfg.validate()?;
    if n < MIN_SAMPLES {
        return Err(Error::invalid("n_samples", format!("{n} < {MIN_SAMPLES}")));
    }
    Ok(())
}

/// Sum of chunk counts; integer addition keeps it schedule-independent.
fn run_chunks(cfg: &SystemConfig, n: u64, seed: u64, stream: u64) -> Result<[u64; 2]> {
    validate(cfg, n)?;
    let samplers = Samplers::new(cfg)?;
    let snr = SnrModel::new(cfg);
    let nu = snr.constants().nu;
    let n_chunks = n.div_ceil(CHUNK);
    let job = |j: u64| {
        let len = CHUNK.min(n - j * CHUNK);
        count_chunk(&samplers, &snr, nu, chunk_rng(seed, stream, j), len)
    };
    let add = |a: [u64; 2], b: [u64; 2]| [a[0] + b[0], a[1] + b[1]];

    #[cfg(feature = "parallel")]
    let total = {
        use rayon::prelude::*;
        (0..n_chunks).into_par_iter().map(job).reduce(|| [0, 0], add)
    };
    #[cfg(not(feature = "parallel"))]
    let total = (0..n_chunks).map(job).fold([0, 0], add);

    Ok(total)
}

/// DF and AF estimates from the same channel draws.
pub fn simulate_both(cfg: &SystemConfig, n: u64, seed: u64) -> Result<(McEstimate, McEstimate)> {
    simulate_both_on_stream(cfg, n, seed, 0)
}

/// [`simulate_both`] on an explicit substream; sweeps use the grid index.
pub fn simulate_both_on_stream(cfg: &SystemConfig, n: u64, seed: u64, stream: u64) -> Result<(McEstimate, McEstimate)> {
    let [df, af] = run_chunks(cfg, n, seed, stream)?;
    Ok((McEstimate::from_counts(df, n, seed), McEstimate::from_counts(af, n, seed)))
}

pub fn simulate_outage(cfg: &SystemConfig, mode: RelayMode, n: u64, seed: u64) -> Result<McEstimate> {
    let (df, af) = simulate_both(cfg, n, seed)?;
    Ok(match mode {
        RelayMode::Df => df,
        RelayMode::Af => af,
    })
}

/// One estimate per grid point, point `i` on substream `i`.
pub fn simulate_sweep(grid: &[SystemConfig], mode: RelayMode, n: u64, seed: u64) -> Result<Vec<McEstimate>> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "must not be empty"));
    }
    grid.iter()
        .enumerate()
        .map(|(i, cfg)| {
            let (df, af) = simulate_both_on_stream(cfg, n, seed, i as u64)?;
            Ok(match mode {
                RelayMode::Df => df,
                RelayMode::Af => af,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use proptest::prelude::*;

    #[test]
    fn wilson_interval_brackets_estimate() {
        let e = McEstimate::from_counts(0, 10_000, 1);
        assert_eq!((e.p_hat, e.stderr, e.ci_low), (0.0, 0.0, 0.0));
        assert!(e.ci_high > 0.0 && e.ci_high < 5e-4);
        let e = McEstimate::from_counts(10_000, 10_000, 1);
        assert_eq!((e.p_hat, e.ci_high), (1.0, 1.0));
        assert!(e.ci_low < 1.0);
        // textbook case: 50/100 → (0.4038, 0.5962)
        let e = McEstimate::from_counts(50, 100, 1);
        assert!((e.ci_low - 0.403_831).abs() < 1e-5 && (e.ci_high - 0.596_169).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn wilson_invariants(n in 1u64..10_000_000, frac in 0.0f64..=1.0) {
            let k = (frac * n as f64).floor() as u64;
            let e = McEstimate::from_counts(k, n, 0);
            prop_assert!(e.ci_low <= e.p_hat && e.p_hat <= e.ci_high);
            prop_assert!(e.ci_low >= 0.0 && e.ci_high <= 1.0);
            prop_assert!((e.stderr - (e.p_hat * (1.0 - e.p_hat) / n as f64).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn same_seed_same_estimate() {
        let cfg = presets::rayleigh();
        let a = simulate_outage(&cfg, RelayMode::Af, 100_000, 7).unwrap();
        let b = simulate_outage(&cfg, RelayMode::Af, 100_000, 7).unwrap();
        assert_eq!(a, b);
        let c = simulate_outage(&cfg, RelayMode::Af, 100_000, 8).unwrap();
        assert_ne!(a.p_hat, c.p_hat);
    }

    #[test]
    fn tiny_rate_never_outage() {
        let cfg = presets::rayleigh().with_rate(1e-12);
        let e = simulate_outage(&cfg, RelayMode::Df, MIN_SAMPLES, 1).unwrap();
        assert_eq!(e.p_hat, 0.0);
    }

    #[test]
    fn chunk_boundaries_do_not_matter() {
        // n spanning a partial chunk equals the sum of its chunk counts
        let cfg = presets::nakagami();
        let n = 2 * CHUNK + 123;
        let total = run_chunks(&cfg, n, 3, 0).unwrap();
        let samplers = Samplers::new(&cfg).unwrap();
        let snr = SnrModel::new(&cfg);
        let nu = snr.constants().nu;
        let mut manual = [0u64; 2];
        for (j, len) in [(0, CHUNK), (1, CHUNK), (2, 123)] {
            let c = count_chunk(&samplers, &snr, nu, chunk_rng(3, 0, j), len);
            manual[0] += c[0];
            manual[1] += c[1];
        }
        assert_eq!(total, manual);
    }

    #[test]
    fn df_never_worse_than_af_on_common_draws() {
        // with σ_R² = σ_D², γ_AF ≤ min(γ_R, γ_D) per draw, so counts are ordered exactly
        for cfg in [presets::rayleigh(), presets::weibull(), presets::nakagami()] {
            let (df, af) = simulate_both(&cfg, 50_000, 11).unwrap();
            assert!(df.p_hat <= af.p_hat);
        }
    }

    #[test]
    fn sweep_uses_indexed_streams() {
        let grid: Vec<_> = [0.5, 1.0, 2.0].iter().map(|&r| presets::weibull().with_rate(r)).collect();
        let sweep = simulate_sweep(&grid, RelayMode::Df, 20_000, 5).unwrap();
        assert_eq!(
            simulate_sweep(&grid[..1], RelayMode::Df, 20_000, 5).unwrap()[0],
            simulate_outage(&grid[0], RelayMode::Df, 20_000, 5).unwrap()
        );
        for (i, cfg) in grid.iter().enumerate() {
            let (df, _) = simulate_both_on_stream(cfg, 20_000, 5, i as u64).unwrap();
            assert_eq!(df, sweep[i]);
        }
        assert!(simulate_sweep(&[], RelayMode::Df, 20_000, 5).is_err());
    }

    #[test]
    fn rejects_small_sample_counts() {
        assert!(simulate_outage(&presets::rayleigh(), RelayMode::Df, 9_999, 0).is_err());
    }
}
