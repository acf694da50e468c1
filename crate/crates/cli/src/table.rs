//! Plain-text table of the first slots of a run: path, latency without
//! setup delay, α, the setup delay charged, and latency with it.

use std::fmt::Write as _;

use lisl_core::scenario::StationPair;
use lisl_core::{CellResultF64, ScenarioResultF64};

use crate::error::CliError;

/// Rounds to hundredths; printed values are derived from these integers so
/// that `with = without + α·η_s` holds exactly in the text.
fn hundredths(x: f64) -> i64 {
    (x * 100.0).round() as i64
}

fn fmt_hundredths(h: i64) -> String {
    let sign = if h < 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", h.abs() / 100, h.abs() % 100)
}

pub const TABLE1_COLUMNS: [&str; 6] = ["slot", "shortest path", "lat_wo_ms", "alpha", "eta_s_ms", "lat_w_ms"];

/// Renders the first `first_n` slots of one cell for setup delay `eta_s_ms`.
pub fn emit_table1(
    result: &ScenarioResultF64,
    pair: &StationPair,
    range_km: f64,
    first_n: usize,
    eta_s_ms: f64,
) -> Result<String, CliError> {
    let cell = result.cell(pair, range_km).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(render(cell, first_n, eta_s_ms))
}

pub(crate) fn render(cell: &CellResultF64, first_n: usize, eta_s_ms: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} | LISL range {} km | eta_s {} ms",
        cell.pair, cell.range_km, eta_s_ms
    );
    let _ = writeln!(out, "{}", TABLE1_COLUMNS.join(" | "));
    let eta_h = hundredths(eta_s_ms);
    for slot in cell.slots.iter().take(first_n) {
        let (path, without) = match (&slot.path, &slot.latency) {
            (Some(p), Some(l)) => (
                p.nodes.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", "),
                Some(hundredths(l.without_ms)),
            ),
            _ => ("unreachable".to_string(), None),
        };
        let charged = i64::from(slot.alpha) * eta_h;
        let (wo, with) = match without {
            Some(w) => (fmt_hundredths(w), fmt_hundredths(w + charged)),
            None => ("NA".into(), "NA".into()),
        };
        let _ = writeln!(
            out,
            "{} | {} | {} | {} | {} | {}",
            slot.slot_index,
            path,
            wo,
            slot.alpha,
            fmt_hundredths(charged),
            with
        );
    }
    out
}

/// A parsed table row, as read back from the text.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub slot: usize,
    pub path: Vec<String>,
    pub without_hundredths: Option<i64>,
    pub alpha: u8,
    pub eta_hundredths: i64,
    pub with_hundredths: Option<i64>,
}

fn parse_hundredths(field: &str) -> Option<i64> {
    let (int, frac) = field.trim().split_once('.')?;
    let neg = int.starts_with('-');
    let int: i64 = int.trim_start_matches('-').parse().ok()?;
    let frac: i64 = frac.parse().ok()?;
    let v = int * 100 + frac;
    Some(if neg { -v } else { v })
}

pub fn parse_table1(text: &str) -> Vec<Table1Row> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("slot |") && !l.trim().is_empty())
        .filter_map(|line| {
            let f: Vec<&str> = line.split(" | ").collect();
            if f.len() != 6 {
                return None;
            }
            Some(Table1Row {
                slot: f[0].parse().ok()?,
                path: f[1].split(", ").map(str::to_string).collect(),
                without_hundredths: parse_hundredths(f[2]),
                alpha: f[3].parse().ok()?,
                eta_hundredths: parse_hundredths(f[4])?,
                with_hundredths: parse_hundredths(f[5]),
            })
        })
        .collect()
}
