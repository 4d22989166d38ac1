use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use alphamu_relay::RelayMode;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "scenario_id",
    "sweep_value",
    "mode",
    "method",
    "outage",
    "err",
    "n_samples",
    "seed",
    "runtime_ms",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Mc,
    HighSnr,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Mc => "mc",
            Method::HighSnr => "high_snr",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario_id: String,
    pub sweep_value: f64,
    pub mode: RelayMode,
    pub method: Method,
    pub outage: f64,
    /// Numerical error estimate (analytic) or standard error (Monte Carlo).
    pub err: f64,
    /// Zero for analytic rows.
    pub n_samples: u64,
    pub seed: u64,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_rows<W: Write>(rows: &[ResultRow], format: Format, sink: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(CSV_HEADER).map_err(csv_err)?;
            for r in rows {
                w.write_record([
                    r.scenario_id.clone(),
                    fmt_f64(r.sweep_value),
                    r.mode.as_str().to_owned(),
                    r.method.as_str().to_owned(),
                    fmt_f64(r.outage),
                    fmt_f64(r.err),
                    r.n_samples.to_string(),
                    r.seed.to_string(),
                    r.runtime_ms.to_string(),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, rows).map_err(|e| CliError::Io(e.into()))?;
            sink.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Writes `rows` to `path`, or to stdout when `path` is `None`.
pub fn emit(rows: &[ResultRow], format: Format, path: Option<&Path>) -> Result<(), CliError> {
    if rows.is_empty() {
        return Err(CliError::Config("nothing to emit".into()));
    }
    match path {
        Some(p) => write_rows(rows, format, io::BufWriter::new(File::create(p)?)),
        None => write_rows(rows, format, io::stdout().lock()),
    }
}

pub fn read_csv<R: io::Read>(source: R) -> Result<Vec<ResultRow>, CliError> {
    csv::Reader::from_reader(source)
        .deserialize()
        .collect::<Result<Vec<ResultRow>, _>>()
        .map_err(csv_err)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(io::Error::other(e))
}
