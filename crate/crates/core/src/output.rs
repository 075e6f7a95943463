//! CSV and JSON artifacts.
//!
//! Numbers in CSV files are written with 17 significant digits so they parse
//! back to the same bits. JSON records are canonical: keys sorted, two-space
//! indent, LF line endings, trailing newline. Every file is written to a
//! temporary sibling first and renamed into place.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::engine::{discrepancy_rows, Comparison, DiscrepancyRow};
use crate::error::{Error, Result};
use crate::spectrum::ProbeSpectrum;

pub const SPECTRUM_HEADER: &str = "p_inv_m,lambda_m,intensity_probe,intensity_post";

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn format_value(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // NaN and inf parse back with str::parse::<f64>
        format!("{x}").to_lowercase()
    }
}

/// CSV text with a header row and one line per row; all cells numeric.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| format_value(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_table_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    write_atomic(path, table_csv(header, rows).as_bytes())
}

/// Probe and any number of post-selected spectra on the probe's grid, one
/// row per node: momentum, wavelength `2 pi / p`, probe, then each spectrum.
pub fn spectra_csv(probe: &ProbeSpectrum<f64>, posts: &[(&str, &ProbeSpectrum<f64>)]) -> Result<String> {
    for (name, post) in posts {
        if post.p_grid() != probe.p_grid() {
            return Err(Error::InvalidGrid(format!(
                "spectrum `{name}` is not on the probe grid"
            )));
        }
    }
    let mut out = String::from("p_inv_m,lambda_m,intensity_probe");
    for (name, _) in posts {
        write!(out, ",{name}").unwrap();
    }
    out.push('\n');
    for (i, &p) in probe.p_grid().iter().enumerate() {
        write!(
            out,
            "{},{},{}",
            format_value(p),
            format_value(TAU / p),
            format_value(probe.intensity()[i])
        )
        .unwrap();
        for (_, post) in posts {
            write!(out, ",{}", format_value(post.intensity()[i])).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_spectrum_csv(path: &Path, probe: &ProbeSpectrum<f64>, post: &ProbeSpectrum<f64>) -> Result<()> {
    write_atomic(path, spectra_csv(probe, &[("intensity_post", post)])?.as_bytes())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub results: Comparison,
    pub discrepancy: Vec<DiscrepancyRow>,
    pub tool_version: String,
    /// RFC 3339, UTC. The only field that changes between identical runs.
    pub timestamp: String,
}

impl RunRecord {
    pub fn new(config: ExperimentConfig, results: Comparison) -> Self {
        RunRecord {
            discrepancy: discrepancy_rows(&results),
            config,
            results,
            tool_version: crate::TOOL_VERSION.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

/// Sorted keys, two-space indent, trailing LF.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Map is a BTreeMap here, so going through Value sorts keys
    let value = serde_json::to_value(value).map_err(|e| Error::validation("<record>", e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| Error::validation("<record>", e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn write_results_json(path: &Path, record: &RunRecord) -> Result<()> {
    write_atomic(path, canonical_json(record)?.as_bytes())
}

pub fn read_results_json(path: &Path) -> Result<RunRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
