//! Report JSON with provenance, and the pump-sweep CSV.
//!
//! Every floating-point field is rounded to 12 significant digits before
//! it is written, so reruns compare byte for byte.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::config::RunConfig;
use crate::noise::{PumpSweepResult, SweepPoint};
use crate::qcka::KeyRateReport;

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    /// SHA-256 of every input file, keyed by file name.
    pub inputs: BTreeMap<String, String>,
    pub config: RunConfig,
    pub report: KeyRateReport,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of `path`'s contents under its file name.
pub fn hash_input(inputs: &mut BTreeMap<String, String>, path: &Path) -> Result<()> {
    let bytes = std::fs::read(path)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    inputs.insert(name, sha256_hex(&bytes));
    Ok(())
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits; `-0` becomes `0`.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with rounded numbers and a trailing newline.
pub fn to_json_rounded<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        to_json_rounded(self)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Serialize)]
struct CsvRow {
    #[serde(rename = "p_mW")]
    p_mw: f64,
    akr: f64,
    rate_hz: f64,
    keyrate_hz: f64,
}

/// `p_mW,akr,rate_hz,keyrate_hz`, one row per grid point.
pub fn sweep_csv(points: &[SweepPoint]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for pt in points {
        w.serialize(CsvRow {
            p_mw: round_significant(pt.p_mw),
            akr: round_significant(pt.akr),
            rate_hz: round_significant(pt.rate_hz),
            keyrate_hz: round_significant(pt.keyrate_hz),
        })
        .map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Argmax summary written next to the sweep CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub argmax_p_mw: f64,
    pub max_keyrate_hz: f64,
    pub interior_optimum: bool,
    pub rate_log_log_slope: Option<f64>,
    pub grid_points: usize,
}

impl SweepSummary {
    pub fn of(sweep: &PumpSweepResult) -> SweepSummary {
        SweepSummary {
            argmax_p_mw: sweep.argmax_p,
            max_keyrate_hz: sweep.points[sweep.argmax_index()].keyrate_hz,
            interior_optimum: sweep.interior_optimum(),
            rate_log_log_slope: crate::noise::log_log_slope(&sweep.points),
            grid_points: sweep.points.len(),
        }
    }
}
