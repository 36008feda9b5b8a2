//! Artifacts: CSV tables, JSON reports, run manifests and the binary table
//! cache.

mod cache;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use cache::{
    cache_dir, cache_table, load_table, read_table, write_table, TableKey, CACHE_ENV, MAGIC,
};

/// 17 significant digits; `NaN`/`inf` spelled out.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Writes a header and rows with LF line endings.
pub fn write_csv<W: Write>(
    out: W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    write_csv(fs::File::create(path)?, header, rows)
}

fn csv_err(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => crate::Error::Integrity(format!("csv: {other:?}")),
    }
}

pub fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut f = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Provenance written next to every artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    pub p: Option<u64>,
    pub family: Option<String>,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub wall_time_s: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub cache_hits: u64,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command_line,
            p: None,
            family: None,
            seed: None,
            timestamp,
            wall_time_s: 0.0,
            tolerances: default_tolerances(),
            cache_hits: 0,
        }
    }

    /// Equality ignoring the timestamp and wall time.
    pub fn same_run(&self, other: &RunManifest) -> bool {
        let strip = |m: &RunManifest| RunManifest {
            timestamp: 0,
            wall_time_s: 0.0,
            ..m.clone()
        };
        strip(self) == strip(other)
    }
}

/// Numeric tolerances in force, by name.
pub fn default_tolerances() -> BTreeMap<String, f64> {
    use crate::families::{TABLE_IMAG_TOL, TABLE_WEIL_SLACK, WEIL_SLACK};
    [
        ("weil_slack", WEIL_SLACK),
        ("table_weil_slack", TABLE_WEIL_SLACK),
        ("table_imag_tol", TABLE_IMAG_TOL),
        ("max_transform_error", crate::spectral::MAX_TRANSFORM_ERROR),
        ("sato_tate_quadrature", crate::chebyshev::ST_TOL),
        ("detector_slack", crate::experiments::DETECTOR_SLACK),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}
