use std::path::PathBuf;
use std::time::Instant;

use alphamu_relay::mcsim::simulate_both_on_stream;
use alphamu_relay::outage::{outage_af, outage_df, outage_high_snr};
use alphamu_relay::{presets, Error, QuadratureSettings, RelayMode, SystemConfig};
use clap::{Parser, ValueEnum};

use crate::output::{emit, Format, Method, ResultRow};
use crate::scenario::{load_scenario, Range, Scenario, Sweep, SweepParam};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Df,
    Af,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Mc,
    HighSnr,
    /// Analytic and Monte Carlo.
    Both,
}

/// Outage probability of a time-switching energy-harvesting full-duplex
/// relay over α-μ fading.
#[derive(Debug, Clone, Parser)]
#[command(name = "alphamu-relay", version)]
pub struct Args {
    /// Scenario file (strict JSON).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario: rayleigh, weibull or nakagami.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Analytic)]
    pub method: MethodArg,
    /// Target rate sweep, start:stop:step in bits/s/Hz.
    #[arg(long, value_name = "A:B:S", group = "sweep")]
    pub rate_sweep: Option<Range>,
    /// Source power sweep, start:stop:step in watts.
    #[arg(long, value_name = "A:B:S", group = "sweep")]
    pub power_sweep: Option<Range>,
    /// α sweep applied to all fading branches.
    #[arg(long, value_name = "A:B:S", group = "sweep")]
    pub alpha_sweep: Option<Range>,
    /// μ for all fading branches.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Energy-harvesting time fraction η.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Fixed target rate (ignored by a rate sweep).
    #[arg(long)]
    pub rate: Option<f64>,
    /// Fixed source power in watts (ignored by a power sweep).
    #[arg(long)]
    pub power: Option<f64>,
    /// α-root mean value of the residual loop-back interference channel.
    #[arg(long)]
    pub lbi_r_hat: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time per row; without it runtime_ms is 0 and the
    /// output is byte-reproducible.
    #[arg(long)]
    pub timing: bool,
}

impl Args {
    fn modes(&self) -> Vec<RelayMode> {
        match self.mode {
            ModeArg::Df => vec![RelayMode::Df],
            ModeArg::Af => vec![RelayMode::Af],
            ModeArg::Both => vec![RelayMode::Df, RelayMode::Af],
        }
    }

    fn methods(&self) -> Vec<Method> {
        match self.method {
            MethodArg::Analytic => vec![Method::Analytic],
            MethodArg::Mc => vec![Method::Mc],
            MethodArg::HighSnr => vec![Method::HighSnr],
            MethodArg::Both => vec![Method::Analytic, Method::Mc],
        }
    }

    fn flag_sweep(&self) -> Option<Sweep> {
        let (parameter, range) = if let Some(r) = self.rate_sweep {
            (SweepParam::TargetRate, r)
        } else if let Some(r) = self.power_sweep {
            (SweepParam::SourcePower, r)
        } else {
            (SweepParam::Alpha, self.alpha_sweep?)
        };
        Some(Sweep { parameter, range })
    }

    /// The scenario after applying preset/config, overrides and sweep flags.
    pub fn scenario(&self) -> Result<(Scenario, Vec<String>), CliError> {
        let (mut scenario, warnings) = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let loaded = load_scenario(path)?;
                (loaded.scenario, loaded.warnings)
            }
            (None, Some(name)) => {
                let config = presets::by_name(name).map_err(|e| CliError::Config(e.to_string()))?;
                (
                    Scenario {
                        id: name.clone(),
                        config,
                        sweep: None,
                    },
                    Vec::new(),
                )
            }
            (None, None) => return Err(CliError::Config("one of --config or --preset is required".into())),
        };
        let cfg = &mut scenario.config;
        if let Some(mu) = self.mu {
            *cfg = SweepParam::Mu.apply(cfg, mu);
        }
        if let Some(eta) = self.eta {
            cfg.eh_time_fraction = eta;
        }
        if let Some(rate) = self.rate {
            cfg.target_rate = rate;
        }
        if let Some(power) = self.power {
            cfg.source_power = power;
        }
        if let Some(r_hat) = self.lbi_r_hat {
            cfg.lbi_fading.r_hat = r_hat;
        }
        if let Some(sweep) = self.flag_sweep() {
            scenario.sweep = Some(sweep);
        }
        scenario.validate()?;
        Ok((scenario, warnings))
    }
}

/// Rows plus the diagnostics gathered while producing them.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub rows: Vec<ResultRow>,
    pub warnings: Vec<String>,
    /// Some analytic row did not reach its tolerance; its best value and
    /// error estimate are still reported.
    pub nonconverged: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.nonconverged {
            3
        } else {
            0
        }
    }
}

fn elapsed_ms(t: Instant, timing: bool) -> u64 {
    if timing {
        t.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn analytic(cfg: &SystemConfig, mode: RelayMode, q: &QuadratureSettings) -> Result<(f64, f64, bool), CliError> {
    let r = match mode {
        RelayMode::Df => outage_df(cfg),
        RelayMode::Af => outage_af(cfg, q),
    };
    match r {
        Ok(r) => Ok((r.value, r.numeric_error, true)),
        Err(Error::Convergence {
            value, error_estimate, ..
        }) => Ok((value, error_estimate, false)),
        Err(e) => Err(CliError::Config(e.to_string())),
    }
}

/// Evaluates every (sweep point × mode × method) row in output order.
pub fn execute(args: &Args) -> Result<Outcome, CliError> {
    let (scenario, mut warnings) = args.scenario()?;
    let modes = args.modes();
    let methods = args.methods();
    if methods.contains(&Method::Mc) && args.samples < alphamu_relay::mcsim::MIN_SAMPLES {
        return Err(CliError::Config(format!(
            "--samples {} is below the minimum {}",
            args.samples,
            alphamu_relay::mcsim::MIN_SAMPLES
        )));
    }
    let q = QuadratureSettings::default();
    let mut rows = Vec::new();
    let mut nonconverged = false;

    for (index, (value, cfg)) in scenario.points().into_iter().enumerate() {
        // both modes share one set of channel draws per sweep point
        let mc = if methods.contains(&Method::Mc) {
            let t = Instant::now();
            let est = simulate_both_on_stream(&cfg, args.samples, args.seed, index as u64)
                .map_err(|e| CliError::Config(e.to_string()))?;
            Some((est, elapsed_ms(t, args.timing)))
        } else {
            None
        };
        for &mode in &modes {
            for &method in &methods {
                let t = Instant::now();
                let (outage, err, n_samples, seed, runtime_ms) = match method {
                    Method::Analytic => {
                        let (v, e, ok) = analytic(&cfg, mode, &q)?;
                        if !ok {
                            nonconverged = true;
                            warnings.push(format!(
                                "{} at sweep value {value}: {} analytic quadrature did not converge",
                                scenario.id,
                                mode.as_str()
                            ));
                        }
                        (v, e, 0, 0, elapsed_ms(t, args.timing))
                    }
                    Method::HighSnr => {
                        let r = outage_high_snr(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
                        (r.value, r.numeric_error, 0, 0, elapsed_ms(t, args.timing))
                    }
                    Method::Mc => {
                        let ((df, af), ms) = mc.expect("simulated above");
                        let e = if mode == RelayMode::Df { df } else { af };
                        (e.p_hat, e.stderr, e.n_samples, e.seed, ms)
                    }
                };
                rows.push(ResultRow {
                    scenario_id: scenario.id.clone(),
                    sweep_value: value,
                    mode,
                    method,
                    outage,
                    err,
                    n_samples,
                    seed,
                    runtime_ms,
                });
            }
        }
    }
    Ok(Outcome {
        rows,
        warnings,
        nonconverged,
    })
}

/// Runs the command and returns the process exit code: 0 on success, 2 on
/// a configuration error, 3 when an analytic row did not converge.
pub fn run(args: &Args) -> i32 {
    let outcome = match execute(args) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = emit(&outcome.rows, args.format, args.out.as_deref()) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    outcome.exit_code()
}
