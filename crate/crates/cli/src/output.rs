//! Result serialization: per-slot and per-cell CSVs, the tolerable-delay
//! sweep, and the run manifest.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use lisl_core::metrics::TolerableDelay;
use lisl_core::{ScenarioMetricsF64, ScenarioResultF64};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SLOTS_CSV: &str = "slots.csv";
pub const METRICS_CSV: &str = "metrics.csv";
pub const TABLE1_TXT: &str = "table1.txt";
pub const TOLERABLE_CSV: &str = "tolerable.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn eta_s_max_field(value: TolerableDelay<f64>) -> String {
    match value {
        TolerableDelay::Value(v) => num(v),
        TolerableDelay::Nonexistent => "NA".into(),
        TolerableDelay::Unbounded => "INF".into(),
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Input(format!("csv: {e}"))
}

pub fn write_slots_csv<W: Write>(result: &ScenarioResultF64, out: W) -> Result<(), CliError> {
    let etas = &result.config.latency.setup_delays_ms;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["pair", "range_km", "slot", "alpha", "path_len_m", "hops", "lat_wo_ms"]
        .map(String::from)
        .to_vec();
    header.extend(etas.iter().map(|e| format!("lat_w_{}_ms", num(*e))));
    w.write_record(&header).map_err(csv_err)?;
    for cell in &result.cells {
        for slot in &cell.slots {
            let mut row = vec![cell.pair.to_string(), num(cell.range_km), slot.slot_index.to_string(), slot.alpha.to_string()];
            match (&slot.path, &slot.latency) {
                (Some(path), Some(lat)) => {
                    row.push(num(path.total_length));
                    row.push(path.hop_count().to_string());
                    row.push(num(lat.without_ms));
                    row.extend(lat.with_ms.iter().map(|v| num(*v)));
                }
                _ => row.extend(std::iter::repeat_n("NA".to_string(), 3 + etas.len())),
            }
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| CliError::Input(e.to_string()))
}

pub fn write_metrics_csv<W: Write>(result: &ScenarioResultF64, out: W) -> Result<(), CliError> {
    let etas = &result.config.latency.setup_delays_ms;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["pair", "range_km", "lambda_pct", "mean_wo_ms"].map(String::from).to_vec();
    header.extend(etas.iter().map(|e| format!("mean_w_{}_ms", num(*e))));
    header.extend(etas.iter().map(|e| format!("beta_{}_pct", num(*e))));
    header.extend(["eta_s_max_ms", "oftn_ms", "dist_m", "mean_hops", "unreachable"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for cell in &result.cells {
        let m = &cell.metrics;
        let mut row = vec![cell.pair.to_string(), num(cell.range_km), num(m.lambda_pct), num(m.mean_latency_without_ms)];
        row.extend(m.mean_latency_with_ms.iter().map(|(_, v)| num(*v)));
        row.extend(m.beta_pct.iter().map(|(_, v)| num(*v)));
        row.push(eta_s_max_field(m.eta_s_max));
        row.push(num(m.oftn_latency_ms));
        row.push(num(m.terrestrial_distance_m));
        row.push(num(m.hops.mean));
        row.push(m.unreachable_slots.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Input(e.to_string()))
}

/// Mean latency with setup delay across a range of η_s, one row per
/// (cell, η_s), next to the fiber baseline.
pub fn write_tolerable_csv<W: Write>(result: &ScenarioResultF64, etas: &[f64], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pair", "range_km", "eta_s_ms", "mean_w_ms", "oftn_ms", "eta_s_max_ms"]).map_err(csv_err)?;
    for cell in &result.cells {
        let m = &cell.metrics;
        for &eta in etas {
            w.write_record([
                cell.pair.to_string(),
                num(cell.range_km),
                num(eta),
                num(m.mean_with(eta)),
                num(m.oftn_latency_ms),
                eta_s_max_field(m.eta_s_max),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush().map_err(|e| CliError::Input(e.to_string()))
}

/// One parsed row of `metrics.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub pair: String,
    pub range_km: f64,
    pub lambda_pct: f64,
    pub mean_wo_ms: f64,
    pub mean_w_ms: Vec<(f64, f64)>,
    pub beta_pct: Vec<(f64, f64)>,
    pub eta_s_max: TolerableDelay<f64>,
    pub oftn_ms: f64,
    pub dist_m: f64,
    pub mean_hops: f64,
    pub unreachable: usize,
}

impl MetricsRow {
    /// True when every field equals the in-memory metrics exactly.
    pub fn matches(&self, metrics: &ScenarioMetricsF64) -> bool {
        self.lambda_pct == metrics.lambda_pct
            && self.mean_wo_ms == metrics.mean_latency_without_ms
            && self.mean_w_ms == metrics.mean_latency_with_ms
            && self.beta_pct == metrics.beta_pct
            && self.eta_s_max == metrics.eta_s_max
            && self.oftn_ms == metrics.oftn_latency_ms
            && self.dist_m == metrics.terrestrial_distance_m
            && self.mean_hops == metrics.hops.mean
            && self.unreachable == metrics.unreachable_slots
    }
}

fn eta_from_column(name: &str, prefix: &str, suffix: &str) -> Option<f64> {
    name.strip_prefix(prefix)?.strip_suffix(suffix)?.parse().ok()
}

pub fn read_metrics_csv<R: Read>(input: R) -> Result<Vec<MetricsRow>, CliError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Input(format!("metrics.csv lacks column {name}")))
    };
    let mean_cols: Vec<(usize, f64)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| eta_from_column(h, "mean_w_", "_ms").map(|e| (i, e)))
        .collect();
    let beta_cols: Vec<(usize, f64)> = header
        .iter()
        .enumerate()
        .filter_map(|(i, h)| eta_from_column(h, "beta_", "_pct").map(|e| (i, e)))
        .collect();
    let (c_pair, c_range, c_lambda, c_wo) = (col("pair")?, col("range_km")?, col("lambda_pct")?, col("mean_wo_ms")?);
    let (c_max, c_oftn, c_dist, c_hops, c_unr) =
        (col("eta_s_max_ms")?, col("oftn_ms")?, col("dist_m")?, col("mean_hops")?, col("unreachable")?);

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let f = |i: usize| -> Result<f64, CliError> {
            record[i].parse().map_err(|_| CliError::Input(format!("metrics.csv: bad number '{}'", &record[i])))
        };
        let eta_s_max = match &record[c_max] {
            "NA" => TolerableDelay::Nonexistent,
            "INF" => TolerableDelay::Unbounded,
            _ => TolerableDelay::Value(f(c_max)?),
        };
        rows.push(MetricsRow {
            pair: record[c_pair].to_string(),
            range_km: f(c_range)?,
            lambda_pct: f(c_lambda)?,
            mean_wo_ms: f(c_wo)?,
            mean_w_ms: mean_cols.iter().map(|&(i, e)| Ok((e, f(i)?))).collect::<Result<_, CliError>>()?,
            beta_pct: beta_cols.iter().map(|&(i, e)| Ok((e, f(i)?))).collect::<Result<_, CliError>>()?,
            eta_s_max,
            oftn_ms: f(c_oftn)?,
            dist_m: f(c_dist)?,
            mean_hops: f(c_hops)?,
            unreachable: record[c_unr]
                .parse()
                .map_err(|_| CliError::Input("metrics.csv: bad unreachable count".into()))?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    path: String,
    bytes: u64,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    provenance: &'a lisl_core::scenario::Provenance,
    config: &'a lisl_core::ScenarioConfigF64,
    warnings: &'a [String],
    files: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `manifest.json` listing every other file under `dir` with its digest.
pub fn write_manifest(dir: &Path, result: &ScenarioResultF64) -> Result<PathBuf, CliError> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).map_err(|e| CliError::Input(format!("{}: {e}", d.display())))? {
            let path = entry.map_err(|e| CliError::Input(e.to_string()))?.path();
            if path.is_dir() {
                stack.push(path);
                continue;
            }
            let rel = path.strip_prefix(dir).expect("under dir").to_string_lossy().replace('\\', "/");
            if rel == MANIFEST_JSON {
                continue;
            }
            let bytes = fs::read(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            files.push(ManifestEntry { path: rel, bytes: bytes.len() as u64, sha256: sha256_hex(&bytes) });
        }
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = Manifest { provenance: &result.provenance, config: &result.config, warnings: &result.warnings, files };
    let path = dir.join(MANIFEST_JSON);
    let json = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Input(e.to_string()))?;
    fs::write(&path, json).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(path)
}
