//! Runs the reference experiment and prints one line per (pair, range).
//!
//! `cargo run --release -p lisl-core --example reference_sweep -- [slots] [phasing] [epoch_s]`

use std::time::Instant;

use lisl_core::metrics::TolerableDelay;
use lisl_core::scenario::run_scenario;
use lisl_core::ScenarioConfigF64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mut config = ScenarioConfigF64::reference();
    if let Some(slots) = args.next() {
        config.num_slots = slots.parse()?;
    }
    if let Some(phasing) = args.next() {
        config.constellation.phasing_factor = phasing.parse()?;
    }
    if let Some(epoch) = args.next() {
        config.constellation.epoch_s = epoch.parse()?;
    }
    let start = Instant::now();
    let result = run_scenario(&config)?;
    for cell in &result.cells {
        let m = &cell.metrics;
        let eta_max = match m.eta_s_max {
            TolerableDelay::Value(v) => format!("{v:.2}"),
            TolerableDelay::Nonexistent => "NA".into(),
            TolerableDelay::Unbounded => "INF".into(),
        };
        println!(
            "{:<20} {:>6} km  lambda {:6.2}%  mean {:6.2} ms  hops {:5.2}  oftn {:6.2}  eta_max {:>8}  unreachable {}",
            cell.pair.to_string(),
            cell.range_km,
            m.lambda_pct,
            m.mean_latency_without_ms,
            m.hops.mean,
            m.oftn_latency_ms,
            eta_max,
            m.unreachable_slots
        );
    }
    eprintln!("elapsed {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
