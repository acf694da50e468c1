//! Experiment orchestration: propagate, build snapshots, route every station
//! pair in every slot, and reduce each (pair, range) cell to metrics.

use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metrics::{aggregate, LatencyParams, ScenarioMetrics};
use crate::orbital::{
    build_constellation, eci_to_ecef, great_circle_distance, propagate, ConstellationSpec, GroundStation,
    Position3D, SatelliteElement,
};
use crate::routing::{alpha_sequence, shortest_paths_from, RoutePath, SlotResult};
use crate::scalar::Scalar;
use crate::topology::{read_snapshots, NodeRef, SnapshotBuilder, TopologySnapshot};

/// Source and destination station names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StationPair(pub String, pub String);

impl StationPair {
    pub fn new(source: impl Into<String>, destination: impl Into<String>) -> Self {
        Self(source.into(), destination.into())
    }

    pub fn source(&self) -> &str {
        &self.0
    }

    pub fn destination(&self) -> &str {
        &self.1
    }
}

impl fmt::Display for StationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologySource {
    /// Build snapshots from the propagated constellation.
    #[default]
    Internal,
    /// Read snapshots from a CSV file in the snapshot format.
    Ingest(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct ScenarioConfig<T> {
    pub constellation: ConstellationSpec<T>,
    pub stations: Vec<GroundStation<T>>,
    pub pairs: Vec<StationPair>,
    pub lisl_ranges_km: Vec<T>,
    #[serde(default = "default_num_slots")]
    pub num_slots: usize,
    #[serde(default = "default_slot_duration")]
    pub slot_duration_s: T,
    #[serde(default)]
    pub latency: LatencyParams<T>,
    #[serde(default)]
    pub topology: TopologySource,
    /// Escalate connectivity warnings to errors.
    #[serde(default)]
    pub strict: bool,
    /// Worker threads; `None` uses the global pool.
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_num_slots() -> usize {
    3600
}

fn default_slot_duration<T: Scalar>() -> T {
    T::one()
}

impl<T: Scalar> ScenarioConfig<T> {
    /// The reference experiment: Starlink Phase I shell, three New York
    /// connections, four LISL ranges, one hour of one-second slots.
    pub fn reference() -> Self {
        let station = |name: &str, lat: f64, lon: f64| GroundStation::new(name, T::lit(lat), T::lit(lon));
        Self {
            constellation: ConstellationSpec::starlink_phase1(),
            stations: vec![
                station("New York", 40.7128, -74.0060),
                station("London", 51.5074, -0.1278),
                station("Istanbul", 41.0082, 28.9784),
                station("Hanoi", 21.0278, 105.8342),
            ],
            pairs: vec![
                StationPair::new("New York", "London"),
                StationPair::new("New York", "Istanbul"),
                StationPair::new("New York", "Hanoi"),
            ],
            lisl_ranges_km: [1500.0, 1700.0, 2500.0, 5016.0].into_iter().map(T::lit).collect(),
            num_slots: default_num_slots(),
            slot_duration_s: T::one(),
            latency: LatencyParams::default(),
            topology: TopologySource::Internal,
            strict: false,
            threads: None,
        }
    }

    pub fn station(&self, name: &str) -> Option<&GroundStation<T>> {
        self.stations.iter().find(|s| s.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        self.constellation.validate()?;
        for (i, gs) in self.stations.iter().enumerate() {
            gs.validate()?;
            if self.stations[..i].iter().any(|o| o.name == gs.name) {
                return Err(Error::Config(format!("ground station '{}' declared twice", gs.name)));
            }
        }
        if self.pairs.is_empty() {
            return Err(Error::Config("at least one station pair is required".into()));
        }
        for pair in &self.pairs {
            for name in [pair.source(), pair.destination()] {
                if self.station(name).is_none() {
                    return Err(Error::Config(format!("pair {pair} references undeclared station '{name}'")));
                }
            }
            if pair.source() == pair.destination() {
                return Err(Error::Config(format!("pair {pair} has identical endpoints")));
            }
        }
        if self.lisl_ranges_km.is_empty() {
            return Err(Error::Config("at least one LISL range is required".into()));
        }
        if let Some(r) = self.lisl_ranges_km.iter().find(|&&r| !(r > T::zero()) || !r.is_finite()) {
            return Err(Error::Config(format!("LISL ranges must be > 0 km, got {r}")));
        }
        if self.num_slots < 1 {
            return Err(Error::Config("num_slots must be >= 1".into()));
        }
        if !(self.slot_duration_s > T::zero()) || !self.slot_duration_s.is_finite() {
            return Err(Error::Config(format!("slot_duration_s must be > 0, got {}", self.slot_duration_s)));
        }
        self.latency.validate()?;
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        if matches!(self.topology, TopologySource::Ingest(_)) && self.lisl_ranges_km.len() != 1 {
            return Err(Error::Config(
                "an ingested topology stands for exactly one LISL range; configure a single range".into(),
            ));
        }
        Ok(())
    }

    /// Time of a slot (numbered from 1) in seconds since the orbital epoch.
    pub fn slot_time(&self, slot_index: usize) -> T {
        self.constellation.epoch_s + T::from_count(slot_index - 1) * self.slot_duration_s
    }

    fn digest(&self) -> String {
        let hash = Sha256::digest(format!("{self:?}").as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub code_version: String,
    /// SHA-256 of the configuration's debug rendering.
    pub config_hash: String,
    pub timestamp_unix_s: u64,
}

impl Provenance {
    fn for_config<T: Scalar>(config: &ScenarioConfig<T>) -> Self {
        Self {
            code_version: env!("CARGO_PKG_VERSION").to_owned(),
            config_hash: config.digest(),
            timestamp_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        }
    }
}

/// Slot series and metrics for one (pair, range) combination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult<T> {
    pub pair: StationPair,
    pub range_km: T,
    pub slots: Vec<SlotResult<T>>,
    pub metrics: ScenarioMetrics<T>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult<T> {
    pub config: ScenarioConfig<T>,
    /// Range-major, then pairs in configuration order.
    pub cells: Vec<CellResult<T>>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

impl<T: Scalar> ScenarioResult<T> {
    pub fn cell(&self, pair: &StationPair, range_km: T) -> Result<&CellResult<T>> {
        self.cells
            .iter()
            .find(|c| &c.pair == pair && c.range_km == range_km)
            .ok_or_else(|| Error::Lookup(format!("no result for pair {pair} at {range_km} km")))
    }
}

/// One Dijkstra search per distinct source station.
struct RoutingPlan {
    searches: Vec<(NodeRef, Vec<NodeRef>, Vec<usize>)>,
    num_pairs: usize,
}

impl RoutingPlan {
    fn new(pairs: &[StationPair]) -> Self {
        let mut searches: Vec<(NodeRef, Vec<NodeRef>, Vec<usize>)> = Vec::new();
        for (i, pair) in pairs.iter().enumerate() {
            let src = NodeRef::ground_station(pair.source());
            let dst = NodeRef::ground_station(pair.destination());
            match searches.iter_mut().find(|(s, _, _)| *s == src) {
                Some((_, dsts, idx)) => {
                    dsts.push(dst);
                    idx.push(i);
                }
                None => searches.push((src, vec![dst], vec![i])),
            }
        }
        Self { searches, num_pairs: pairs.len() }
    }

    fn route<T: Scalar>(&self, snapshot: &TopologySnapshot<T>) -> Result<Vec<Option<RoutePath<T>>>> {
        let mut out = vec![None; self.num_pairs];
        for (src, dsts, idx) in &self.searches {
            for (path, &i) in shortest_paths_from(snapshot, src, dsts)?.into_iter().zip(idx) {
                out[i] = path;
            }
        }
        Ok(out)
    }
}

/// Constellation state shared by every range of an internal run.
struct Propagator<T> {
    elements: Vec<SatelliteElement<T>>,
    ids: Vec<String>,
}

impl<T: Scalar> Propagator<T> {
    fn new(spec: &ConstellationSpec<T>) -> Result<Self> {
        let elements = build_constellation(spec)?;
        let ids = elements.iter().map(|e| e.id.to_string()).collect();
        Ok(Self { elements, ids })
    }

    fn ecef_positions(&self, t: T) -> Result<Vec<Position3D<T>>> {
        self.elements.iter().map(|e| eci_to_ecef(&propagate(e, t), t)).collect()
    }
}

/// Snapshots of an internally propagated run at one LISL range, in slot order.
pub fn internal_snapshots<T: Scalar>(
    config: &ScenarioConfig<T>,
    range_km: T,
) -> Result<impl Iterator<Item = Result<TopologySnapshot<T>>> + '_> {
    config.validate()?;
    let propagator = Propagator::new(&config.constellation)?;
    let builder = SnapshotBuilder::new(&propagator.ids, &config.stations, range_km)?;
    Ok((1..=config.num_slots).map(move |slot| {
        let positions = propagator.ecef_positions(config.slot_time(slot))?;
        builder.build(slot, &positions)
    }))
}

fn with_pool<R: Send>(threads: Option<usize>, work: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

/// Routes of every pair in one slot, in pair order.
type SlotRoutes<T> = Vec<Option<RoutePath<T>>>;

/// Runs every (pair, range) cell of `config`. Identical configurations give
/// identical cells regardless of the worker count.
pub fn run_scenario<T: Scalar>(config: &ScenarioConfig<T>) -> Result<ScenarioResult<T>> {
    config.validate()?;
    let plan = RoutingPlan::new(&config.pairs);

    let routed: Vec<(T, Vec<SlotRoutes<T>>)> = match &config.topology {
        TopologySource::Internal => {
            let propagator = Propagator::new(&config.constellation)?;
            let base = SnapshotBuilder::new(&propagator.ids, &config.stations, config.lisl_ranges_km[0])?;
            let mut all = Vec::with_capacity(config.lisl_ranges_km.len());
            for &range in &config.lisl_ranges_km {
                log::info!("routing {} slots at {range} km", config.num_slots);
                let builder = base.with_range(range)?;
                let per_slot = with_pool(config.threads, || {
                    (1..=config.num_slots)
                        .into_par_iter()
                        .map(|slot| {
                            let positions = propagator.ecef_positions(config.slot_time(slot))?;
                            plan.route(&builder.build(slot, &positions)?)
                        })
                        .collect::<Result<Vec<_>>>()
                })??;
                all.push((range, per_slot));
            }
            all
        }
        TopologySource::Ingest(path) => {
            let file = File::open(path)
                .map_err(|e| Error::Input(format!("cannot open snapshot file {}: {e}", path.display())))?;
            let snapshots: Vec<TopologySnapshot<T>> = read_snapshots(BufReader::new(file))?;
            if snapshots.len() < config.num_slots {
                return Err(Error::Input(format!(
                    "snapshot file {} covers {} slots but the scenario needs {}",
                    path.display(),
                    snapshots.len(),
                    config.num_slots
                )));
            }
            let per_slot = with_pool(config.threads, || {
                snapshots[..config.num_slots]
                    .par_iter()
                    .map(|snap| {
                        plan.route(snap).map_err(|e| match e {
                            Error::Lookup(msg) => Error::Input(msg),
                            other => other,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })??;
            vec![(config.lisl_ranges_km[0], per_slot)]
        }
    };

    let mut cells = Vec::with_capacity(routed.len() * config.pairs.len());
    let mut warnings = Vec::new();
    for (range, per_slot) in routed {
        for (p, pair) in config.pairs.iter().enumerate() {
            let paths: Vec<Option<RoutePath<T>>> = per_slot.iter().map(|row| row[p].clone()).collect();
            let cell = evaluate_cell(config, pair, range, paths)?;
            let unreachable = cell.metrics.unreachable_slots;
            if unreachable > 0 {
                let msg = format!(
                    "{pair} at {range} km: destination unreachable in {unreachable} of {} slots (excluded from latency means)",
                    config.num_slots
                );
                if 2 * unreachable > config.num_slots && config.strict {
                    return Err(Error::Input(msg));
                }
                log::warn!("{msg}");
                warnings.push(msg);
            }
            cells.push(cell);
        }
    }

    Ok(ScenarioResult {
        config: config.clone(),
        cells,
        provenance: Provenance::for_config(config),
        warnings,
    })
}

fn evaluate_cell<T: Scalar>(
    config: &ScenarioConfig<T>,
    pair: &StationPair,
    range_km: T,
    paths: Vec<Option<RoutePath<T>>>,
) -> Result<CellResult<T>> {
    let alphas = alpha_sequence(&paths);
    let slots: Vec<SlotResult<T>> = paths
        .into_iter()
        .zip(alphas)
        .enumerate()
        .map(|(i, (path, alpha))| SlotResult::new(i + 1, path, alpha, &config.latency))
        .collect();
    let (src, dst) = (
        config.station(pair.source()).expect("validated"),
        config.station(pair.destination()).expect("validated"),
    );
    let metrics = aggregate(&slots, &config.latency, great_circle_distance(src, dst))
        .map_err(|e| Error::Input(format!("{pair} at {range_km} km: {e}")))?;
    Ok(CellResult { pair: pair.clone(), range_km, slots, metrics })
}

/// Runs the full pair × range cross product and returns one result per cell.
pub fn sweep<T: Scalar>(config: &ScenarioConfig<T>) -> Result<Vec<ScenarioResult<T>>> {
    let full = run_scenario(config)?;
    Ok(full
        .cells
        .into_iter()
        .map(|cell| {
            let narrowed = ScenarioConfig {
                pairs: vec![cell.pair.clone()],
                lisl_ranges_km: vec![cell.range_km],
                ..config.clone()
            };
            let provenance = Provenance { config_hash: narrowed.digest(), ..full.provenance.clone() };
            let warnings = full
                .warnings
                .iter()
                .filter(|w| w.starts_with(&format!("{} at {} km", cell.pair, cell.range_km)))
                .cloned()
                .collect();
            ScenarioResult { config: narrowed, cells: vec![cell], provenance, warnings }
        })
        .collect())
}
