//! Static SVG charts built from the result tables. Failures here are
//! reported and skipped; the CSVs are the primary output.

use std::path::{Path, PathBuf};

use lisl_core::ScenarioResultF64;
use plotters::prelude::*;

type PlotResult<T> = Result<T, Box<dyn std::error::Error>>;

fn slug(text: &str) -> String {
    text.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

struct BarChart<'a> {
    title: &'a str,
    y_label: &'a str,
    groups: Vec<String>,
    series: Vec<(String, Vec<f64>)>,
}

fn draw_bars(path: &Path, chart: &BarChart<'_>) -> PlotResult<()> {
    let root = SVGBackend::new(path, (900, 540)).into_drawing_area();
    root.fill(&WHITE)?;
    let positive = chart.series.iter().flat_map(|(_, v)| v.iter().copied()).filter(|v| *v > 0.0);
    let (lo, hi) = positive.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (y_min, y_max) = if lo.is_finite() { (lo / 2.0, hi * 2.0) } else { (0.1, 1.0) };
    let n_groups = chart.groups.len() as f64;

    let mut ctx = ChartBuilder::on(&root)
        .caption(chart.title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(30)
        .y_label_area_size(60)
        .build_cartesian_2d(0.0..n_groups, (y_min..y_max).log_scale())?;
    ctx.configure_mesh()
        .disable_x_mesh()
        .x_labels(0)
        .y_desc(chart.y_label)
        .draw()?;

    let n_series = chart.series.len().max(1) as f64;
    let width = 0.8 / n_series;
    for (s, (name, values)) in chart.series.iter().enumerate() {
        let color = Palette99::pick(s).mix(0.9);
        let bars = values.iter().enumerate().map(move |(g, &v)| {
            let x0 = g as f64 + 0.1 + width * s as f64;
            Rectangle::new([(x0, y_min), (x0 + width, v.max(y_min))], color.filled())
        });
        ctx.draw_series(bars)?
            .label(name.as_str())
            .legend(move |(x, y)| Rectangle::new([(x, y - 5), (x + 10, y + 5)], Palette99::pick(s).filled()));
    }
    ctx.draw_series(chart.groups.iter().enumerate().map(|(g, label)| {
        Text::new(label.clone(), (g as f64 + 0.4, y_min * 1.15), ("sans-serif", 15))
    }))?;
    ctx.configure_series_labels().border_style(BLACK).background_style(WHITE.mix(0.8)).draw()?;
    root.present()?;
    Ok(())
}

fn draw_tolerable(path: &Path, result: &ScenarioResultF64, pair: &str, etas: &[f64]) -> PlotResult<()> {
    let cells: Vec<_> = result.cells.iter().filter(|c| c.pair.to_string() == pair).collect();
    let (Some(first), Some(&x_max)) = (cells.first(), etas.last()) else {
        return Ok(());
    };
    let x_min = etas[0];
    let oftn = first.metrics.oftn_latency_ms;
    let y_max = cells.iter().map(|c| c.metrics.mean_with(x_max)).fold(oftn, f64::max) * 1.1;
    let y_min = cells.iter().map(|c| c.metrics.mean_latency_without_ms).fold(oftn, f64::min) * 0.9;

    let root = SVGBackend::new(path, (900, 540)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut ctx = ChartBuilder::on(&root)
        .caption(format!("{pair}: mean latency vs setup delay"), ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x_min..x_max, y_min..y_max)?;
    ctx.configure_mesh().x_desc("setup delay (ms)").y_desc("latency (ms)").draw()?;
    for (i, cell) in cells.iter().enumerate() {
        let color = Palette99::pick(i);
        ctx.draw_series(LineSeries::new(etas.iter().map(|&e| (e, cell.metrics.mean_with(e))), color.stroke_width(2)))?
            .label(format!("{} km", cell.range_km))
            .legend(move |(x, y)| PathElement::new([(x, y), (x + 14, y)], Palette99::pick(i).stroke_width(2)));
    }
    ctx.draw_series(LineSeries::new([(x_min, oftn), (x_max, oftn)], BLACK.stroke_width(2)))?
        .label("fiber")
        .legend(|(x, y)| PathElement::new([(x, y), (x + 14, y)], BLACK.stroke_width(2)));
    ctx.configure_series_labels().border_style(BLACK).background_style(WHITE.mix(0.8)).draw()?;
    root.present()?;
    Ok(())
}

/// Writes every chart into `dir`, returning the files that were produced.
pub fn write_plots(dir: &Path, result: &ScenarioResultF64, sweep: Option<&[f64]>) -> Vec<PathBuf> {
    let mut written = Vec::new();
    let mut attempt = |path: PathBuf, outcome: PlotResult<()>| match outcome {
        Ok(()) => written.push(path),
        Err(e) => {
            log::warn!("skipping plot {}: {e}", path.display());
            let _ = std::fs::remove_file(&path);
        }
    };

    let mut ranges: Vec<f64> = Vec::new();
    let mut pairs: Vec<String> = Vec::new();
    for cell in &result.cells {
        if !ranges.contains(&cell.range_km) {
            ranges.push(cell.range_km);
        }
        let p = cell.pair.to_string();
        if !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    let groups: Vec<String> = ranges.iter().map(|r| format!("{r} km")).collect();
    let metric = |pair: &str, f: &dyn Fn(&lisl_core::ScenarioMetricsF64) -> f64| -> Vec<f64> {
        ranges
            .iter()
            .map(|&r| {
                result
                    .cells
                    .iter()
                    .find(|c| c.range_km == r && c.pair.to_string() == pair)
                    .map_or(0.0, |c| f(&c.metrics))
            })
            .collect()
    };

    let path = dir.join("fig2_path_change_rate.svg");
    let chart = BarChart {
        title: "Path change rate",
        y_label: "lambda (%)",
        groups: groups.clone(),
        series: pairs.iter().map(|p| (p.clone(), metric(p, &|m| m.lambda_pct))).collect(),
    };
    attempt(path.clone(), draw_bars(&path, &chart));

    let etas = &result.config.latency.setup_delays_ms;
    for pair in &pairs {
        let mut series = vec![("without".to_string(), metric(pair, &|m| m.mean_latency_without_ms))];
        for (k, eta) in etas.iter().enumerate() {
            series.push((format!("eta_s = {eta} ms"), metric(pair, &|m| m.mean_latency_with_ms[k].1)));
        }
        let title = format!("{pair}: mean end-to-end latency");
        let path = dir.join(format!("fig3_latency_{}.svg", slug(pair)));
        let chart = BarChart { title: &title, y_label: "latency (ms)", groups: groups.clone(), series };
        attempt(path.clone(), draw_bars(&path, &chart));

        let series = etas
            .iter()
            .enumerate()
            .map(|(k, eta)| (format!("eta_s = {eta} ms"), metric(pair, &|m| m.beta_pct[k].1)))
            .collect();
        let title = format!("{pair}: impact of setup delay");
        let path = dir.join(format!("fig4_impact_{}.svg", slug(pair)));
        let chart = BarChart { title: &title, y_label: "beta (%)", groups: groups.clone(), series };
        attempt(path.clone(), draw_bars(&path, &chart));

        if let Some(sweep) = sweep.filter(|s| s.len() >= 2) {
            let path = dir.join(format!("fig5_tolerable_{}.svg", slug(pair)));
            attempt(path.clone(), draw_tolerable(&path, result, pair, sweep));
        }
    }
    written
}
