//! Acceptance suite: one PASS/FAIL line per criterion. Runs the full one-hour
//! reference sweep once and reuses it for the checks that need it.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lisl_cli::output::{write_metrics_csv, write_slots_csv};
use lisl_cli::table::{emit_table1, parse_table1};
use lisl_core::metrics::{max_tolerable_setup_delay, oftn_latency, TolerableDelay};
use lisl_core::orbital::{
    build_constellation, great_circle_distance, max_lisl_range, propagate, GroundStation,
};
use lisl_core::routing::shortest_path;
use lisl_core::scenario::{internal_snapshots, run_scenario, StationPair};
use lisl_core::topology::{NodeRef, TopologySnapshot};
use lisl_core::{ScenarioConfigF64, ScenarioResultF64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIRS: [&str; 3] = ["London", "Istanbul", "Hanoi"];
const RANGES: [f64; 4] = [1500.0, 1700.0, 2500.0, 5016.0];

#[derive(Default)]
struct Report {
    fatal_failures: usize,
}

impl Report {
    fn record(&mut self, id: u32, title: &str, pass: bool, detail: String) {
        println!("[{}] {id:>2} {title}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.fatal_failures += 1;
        }
    }

    fn soft(&mut self, id: u32, title: &str, pass: bool, detail: String) {
        println!("[{}] {id:>2} {title} (soft): {detail}", if pass { "PASS" } else { "MISS" });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn pair(dst: &str) -> StationPair {
    StationPair::new("New York", dst)
}

fn oftn_baseline(r: &mut Report) {
    let cases = [(5593e3, 27.38), (8079e3, 39.55), (13164e3, 64.44)];
    let got: Vec<f64> = cases.iter().map(|&(d, _)| oftn_latency(d)).collect();
    let pass = cases.iter().zip(&got).all(|(&(_, want), &g)| (g - want).abs() <= 0.01);
    r.record(1, "fiber baseline latency", pass, format!("{got:.4?} ms vs [27.38, 39.55, 64.44] +-0.01"));
}

fn tolerable_desk_checks(r: &mut Report) {
    let cases = [
        ((39.55f64, 37.9, 37.5), Some(4.40f64)),
        ((39.55, 36.9, 12.3), Some(21.54)),
        ((64.44, 56.7, 9.6), Some(80.63)),
        ((64.44, 66.5, 33.9), None),
    ];
    let mut pass = true;
    let mut shown = Vec::new();
    for ((oftn, mean, lambda), want) in cases {
        let got = max_tolerable_setup_delay(oftn, mean, lambda);
        pass &= match (got, want) {
            (TolerableDelay::Value(v), Some(w)) => (v - w).abs() <= 0.01,
            (TolerableDelay::Nonexistent, None) => true,
            _ => false,
        };
        shown.push(match got {
            TolerableDelay::Value(v) => format!("{v:.3}"),
            other => format!("{other:?}"),
        });
    }
    r.record(2, "max tolerable setup delay desk checks", pass, format!("[{}] vs [4.40, 21.54, 80.63, none]", shown.join(", ")));
}

fn max_range(r: &mut Report) {
    let got = max_lisl_range(550.0f64, 80.0).unwrap();
    r.record(3, "maximum LISL range", (got - 5016.0).abs() <= 10.0, format!("{got:.2} km vs 5016 +-10"));
}

fn setup_identity(r: &mut Report, full: &ScenarioResultF64) {
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for cell in &full.cells {
        let reachable: Vec<_> = cell.slots.iter().filter_map(|s| s.latency.as_ref()).collect();
        for (k, &eta) in full.config.latency.setup_delays_ms.iter().enumerate() {
            let averaged = reachable.iter().map(|l| l.with_ms[k]).sum::<f64>() / reachable.len() as f64;
            let predicted = cell.metrics.mean_latency_without_ms + cell.metrics.lambda_pct / 100.0 * eta;
            worst = worst.max(rel(averaged, predicted));
            checks += 1;
        }
    }
    r.record(4, "slot-averaged latency with setup delay", worst <= 1e-9, format!("{checks} cell/eta checks, worst rel err {worst:.2e}"));
}

fn tolerable_consistency(r: &mut Report, full: &ScenarioResultF64) {
    let mut worst: f64 = 0.0;
    let mut existing = 0;
    for cell in &full.cells {
        let m = &cell.metrics;
        if let TolerableDelay::Value(eta) = m.eta_s_max {
            existing += 1;
            let with = m.mean_latency_without_ms + m.lambda_pct / 100.0 * eta;
            worst = worst.max(rel(with, m.oftn_latency_ms));
        }
    }
    r.record(5, "tolerable delay reproduces fiber latency", worst <= 1e-9, format!("{existing} cells with a value, worst rel err {worst:.2e}"));
}

fn table_arithmetic(r: &mut Report, full: &ScenarioResultF64) {
    let mut changed_rows = 0;
    let mut bad = 0;
    for cell in &full.cells {
        let text = emit_table1(full, &cell.pair, cell.range_km, cell.slots.len(), 100.0).unwrap();
        for row in parse_table1(&text).into_iter().filter(|row| row.alpha == 1) {
            changed_rows += 1;
            if row.with_hundredths != row.without_hundredths.map(|w| w + 10_000) {
                bad += 1;
            }
        }
    }

    let reference = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/reference.toml");
    let out = Command::new(env!("CARGO_BIN_EXE_lisl"))
        .args(["table1", "--config", reference.to_str().unwrap()])
        .args(["--pair", "New York:Istanbul", "--range", "1500", "--first-n", "6", "--eta", "100"])
        .output()
        .expect("run lisl table1");
    let printed = parse_table1(&String::from_utf8_lossy(&out.stdout));
    let cli_ok = out.status.success()
        && printed.len() == 6
        && printed.iter().all(|row| row.with_hundredths == row.without_hundredths.map(|w| w + i64::from(row.alpha) * 10_000));
    r.record(
        6,
        "per-slot table arithmetic",
        changed_rows > 0 && bad == 0 && cli_ok,
        format!("{changed_rows} rows with alpha=1, {bad} mismatches; cli table1 {}", if cli_ok { "ok" } else { "wrong" }),
    );
}

fn random_graph(rng: &mut ChaCha8Rng) -> Vec<Vec<Option<f64>>> {
    let n = rng.gen_range(2..=10);
    let density = rng.gen_range(0.15..0.9);
    let mut w = vec![vec![None; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                let x = rng.gen_range(0.01..100.0);
                w[a][b] = Some(x);
                w[b][a] = Some(x);
            }
        }
    }
    w
}

fn brute_force_shortest(w: &[Vec<Option<f64>>], src: usize, dst: usize) -> Option<f64> {
    fn walk(w: &[Vec<Option<f64>>], cur: usize, dst: usize, len: f64, seen: &mut [bool], best: &mut Option<f64>) {
        if cur == dst {
            *best = Some(best.map_or(len, |b: f64| b.min(len)));
            return;
        }
        for next in 0..w.len() {
            if let (Some(x), false) = (w[cur][next], seen[next]) {
                seen[next] = true;
                walk(w, next, dst, len + x, seen, best);
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; w.len()];
    seen[src] = true;
    let mut best = None;
    walk(w, src, dst, 0.0, &mut seen, &mut best);
    best
}

fn dijkstra_oracle(r: &mut Report) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let instances = 300;
    let mut mismatches = 0;
    for _ in 0..instances {
        let w = random_graph(&mut rng);
        let n = w.len();
        let name = |i: usize| NodeRef::satellite(format!("n{i}"));
        let edges = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter_map(|(a, b)| w[a][b].map(|x| (name(a), name(b), x)))
            .collect::<Vec<_>>();
        let snap = TopologySnapshot::from_parts(1, (0..n).map(name), edges).unwrap();
        let (src, dst) = (0, n - 1);
        let got = shortest_path(&snap, &name(src), &name(dst)).unwrap().map(|p| p.total_length);
        let want = brute_force_shortest(&w, src, dst);
        let agree = match (got, want) {
            (Some(g), Some(b)) => rel(g, b) <= 1e-12,
            (None, None) => true,
            _ => false,
        };
        mismatches += usize::from(!agree);
    }
    let elapsed = start.elapsed();
    r.record(
        7,
        "shortest paths against exhaustive search",
        mismatches == 0 && elapsed < Duration::from_secs(10),
        format!("{instances} graphs, {mismatches} mismatches, {:.2} s", elapsed.as_secs_f64()),
    );
}

fn law_of_cosines_m(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let c = (p1.sin() * p2.sin() + p1.cos() * p2.cos() * (lon2 - lon1).to_radians().cos()).clamp(-1.0, 1.0);
    6_371_000.0 * c.acos()
}

fn haversine_oracle(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6E0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (lat1, lon1) = (rng.gen_range(-90.0..=90.0), rng.gen_range(-180.0..=180.0));
        let (lat2, lon2) = (rng.gen_range(-90.0..=90.0), rng.gen_range(-180.0..=180.0));
        let h = great_circle_distance(&GroundStation::new("a", lat1, lon1), &GroundStation::new("b", lat2, lon2));
        worst = worst.max(rel(h, law_of_cosines_m(lat1, lon1, lat2, lon2)));
    }
    r.record(8, "haversine against law of cosines", worst <= 1e-6, format!("1000 pairs, worst rel err {worst:.2e}"));
}

fn geometry_and_determinism(r: &mut Report) {
    let cfg = ScenarioConfigF64::reference();
    let elems = build_constellation(&cfg.constellation).unwrap();
    let mut radius_err: f64 = 0.0;
    let mut closure_km: f64 = 0.0;
    for e in &elems {
        for t in [0.0, 777.7, 3599.0] {
            radius_err = radius_err.max(rel(propagate(e, t).norm(), e.orbital_radius));
        }
        let p0 = propagate(e, 0.0);
        closure_km = closure_km.max(p0.distance(&propagate(e, e.period_s())));
    }

    let mut monotone = true;
    let mut small = cfg.clone();
    small.num_slots = 3;
    let per_range: Vec<Vec<_>> = RANGES
        .iter()
        .map(|&range| internal_snapshots(&small, range).unwrap().map(Result::unwrap).collect())
        .collect();
    for w in per_range.windows(2) {
        for (a, b) in w[0].iter().zip(&w[1]) {
            monotone &= a.edges().iter().all(|e| b.edge_length(a.node(e.a), a.node(e.b)) == Some(e.length_m));
            monotone &= a.edges().len() <= b.edges().len();
        }
    }

    let mut reduced = cfg.clone();
    reduced.num_slots = 30;
    let workers = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    let outputs = [1, workers].map(|threads| {
        reduced.threads = Some(threads);
        let result = run_scenario(&reduced).unwrap();
        let (mut slots, mut metrics) = (Vec::new(), Vec::new());
        write_slots_csv(&result, &mut slots).unwrap();
        write_metrics_csv(&result, &mut metrics).unwrap();
        (result.cells, slots, metrics)
    });
    let deterministic = outputs[0] == outputs[1];

    let pass = radius_err <= 1e-9 && closure_km <= 1e-6 && monotone && deterministic;
    r.record(
        9,
        "geometry invariants and parallel determinism",
        pass,
        format!(
            "radius rel err {radius_err:.1e}, closure {closure_km:.1e} km, edge sets nested {monotone}, 1 vs {workers} workers identical {deterministic}"
        ),
    );
}

fn metrics_of<'a>(full: &'a ScenarioResultF64, dst: &str, range: f64) -> &'a lisl_core::ScenarioMetricsF64 {
    &full.cell(&pair(dst), range).unwrap().metrics
}

fn trends(r: &mut Report, full: &ScenarioResultF64) {
    let mut failures = Vec::new();
    for dst in PAIRS {
        for w in RANGES.windows(2) {
            let (a, b) = (metrics_of(full, dst, w[0]), metrics_of(full, dst, w[1]));
            if b.lambda_pct > a.lambda_pct {
                failures.push(format!("lambda NY-{dst} rises {}->{} km", w[0], w[1]));
            }
            if b.mean_latency_without_ms > a.mean_latency_without_ms {
                failures.push(format!("latency NY-{dst} rises {}->{} km", w[0], w[1]));
            }
        }
    }
    for range in RANGES {
        let [l, i, h] = PAIRS.map(|d| metrics_of(full, d, range).lambda_pct);
        if !(h >= i && i >= l) {
            failures.push(format!("lambda order at {range} km: London {l:.2}, Istanbul {i:.2}, Hanoi {h:.2}"));
        }
    }
    let table: Vec<String> = PAIRS
        .iter()
        .map(|d| {
            let lambdas: Vec<String> = RANGES.iter().map(|&x| format!("{:.2}", metrics_of(full, d, x).lambda_pct)).collect();
            format!("NY-{d} lambda% [{}]", lambdas.join(", "))
        })
        .collect();
    let detail = if failures.is_empty() { table.join("; ") } else { failures.join("; ") };
    r.record(10, "trends across ranges and pairs", failures.is_empty(), detail);
}

fn soft_targets(r: &mut Report, full: &ScenarioResultF64) {
    let ist = metrics_of(full, "Istanbul", 1500.0);
    r.soft(11, "NY-Istanbul 1500 km lambda", (ist.lambda_pct - 37.5).abs() <= 8.0, format!("{:.2}% vs 37.5 +-8", ist.lambda_pct));
    let latency_targets = [
        ("Istanbul", 1500.0, 37.9),
        ("Hanoi", 1500.0, 66.5),
        ("Hanoi", 1700.0, 64.4),
        ("Hanoi", 5016.0, 56.7),
        ("London", 1700.0, 25.9),
        ("London", 2500.0, 24.6),
    ];
    for (dst, range, want) in latency_targets {
        let got = metrics_of(full, dst, range).mean_latency_without_ms;
        r.soft(11, &format!("NY-{dst} {range} km mean latency"), rel(got, want) <= 0.10, format!("{got:.2} ms vs {want} +-10%"));
    }
    for (range, want) in [(1500.0, 7.0), (1700.0, 6.0)] {
        let got = metrics_of(full, "Istanbul", range).hops.mean;
        r.soft(11, &format!("NY-Istanbul {range} km mean hops"), (got - want).abs() <= 1.0, format!("{got:.2} vs {want} +-1"));
    }
}

fn main() -> ExitCode {
    let mut report = Report::default();
    oftn_baseline(&mut report);
    tolerable_desk_checks(&mut report);
    max_range(&mut report);

    let start = Instant::now();
    let full = run_scenario(&ScenarioConfigF64::reference()).expect("reference sweep");
    let sweep_time = start.elapsed();

    setup_identity(&mut report, &full);
    tolerable_consistency(&mut report, &full);
    table_arithmetic(&mut report, &full);
    dijkstra_oracle(&mut report);
    haversine_oracle(&mut report);
    geometry_and_determinism(&mut report);
    trends(&mut report, &full);
    soft_targets(&mut report, &full);
    report.record(
        12,
        "full reference sweep runtime",
        sweep_time < Duration::from_secs(15 * 60),
        format!(
            "{} cells x {} slots in {:.1} s on {} worker(s), limit 900 s",
            full.cells.len(),
            full.config.num_slots,
            sweep_time.as_secs_f64(),
            rayon_threads()
        ),
    );

    if report.fatal_failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.fatal_failures);
        ExitCode::FAILURE
    }
}

fn rayon_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
