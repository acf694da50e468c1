use std::sync::Arc;

use super::snapshot::{Edge, NodeRef, NodeTable, TopologySnapshot};
use crate::error::{Error, Result};
use crate::orbital::{elevation_angle, ground_station_position, Frame, GroundStation, Position3D};
use crate::scalar::Scalar;

/// Reusable per-scenario state for building snapshots at successive slots.
///
/// The node set (satellites and stations) is fixed for a scenario, so the
/// sorted node table is computed once and shared by every snapshot.
#[derive(Debug, Clone)]
pub struct SnapshotBuilder<T> {
    table: Arc<NodeTable>,
    /// Node index of each satellite, in input order.
    sat_nodes: Vec<usize>,
    stations: Vec<(usize, Position3D<T>, T)>,
    lisl_range_km: T,
}

impl<T: Scalar> SnapshotBuilder<T> {
    pub fn new(satellite_ids: &[String], stations: &[GroundStation<T>], lisl_range_km: T) -> Result<Self> {
        if !(lisl_range_km > T::zero()) || !lisl_range_km.is_finite() {
            return Err(Error::Config(format!("LISL range must be > 0 km, got {lisl_range_km}")));
        }
        for gs in stations {
            gs.validate()?;
        }
        let nodes: Vec<NodeRef> = satellite_ids
            .iter()
            .map(NodeRef::satellite)
            .chain(stations.iter().map(|gs| NodeRef::ground_station(gs.name.clone())))
            .collect();
        let table = Arc::new(NodeTable::new(nodes)?);
        let sat_nodes = satellite_ids
            .iter()
            .map(|id| table.index[&NodeRef::satellite(id.clone())])
            .collect();
        let stations = stations
            .iter()
            .map(|gs| {
                let idx = table.index[&NodeRef::ground_station(gs.name.clone())];
                (idx, ground_station_position(gs), gs.min_elevation_deg)
            })
            .collect();
        Ok(Self { table, sat_nodes, stations, lisl_range_km })
    }

    pub fn lisl_range_km(&self) -> T {
        self.lisl_range_km
    }

    pub fn with_range(&self, lisl_range_km: T) -> Result<Self> {
        if !(lisl_range_km > T::zero()) || !lisl_range_km.is_finite() {
            return Err(Error::Config(format!("LISL range must be > 0 km, got {lisl_range_km}")));
        }
        Ok(Self { lisl_range_km, ..self.clone() })
    }

    /// Builds the snapshot for one slot from Earth-fixed satellite positions,
    /// given in the same order as the ids passed to [`SnapshotBuilder::new`].
    pub fn build(&self, slot_index: usize, sat_positions: &[Position3D<T>]) -> Result<TopologySnapshot<T>> {
        if sat_positions.len() != self.sat_nodes.len() {
            return Err(Error::Config(format!(
                "expected {} satellite positions, got {}",
                self.sat_nodes.len(),
                sat_positions.len()
            )));
        }
        if let Some(p) = sat_positions.iter().find(|p| p.frame != Frame::Ecef) {
            return Err(Error::Frame { expected: "ECEF", actual: p.frame.as_str() });
        }
        let km_to_m = T::lit(1000.0);
        let range = self.lisl_range_km;
        let range_sq = range * range;
        let mut edges = Vec::new();

        // sweep along x: only pairs whose x-separation is within range can link
        let mut order: Vec<usize> = (0..sat_positions.len()).collect();
        order.sort_by(|&i, &j| {
            sat_positions[i]
                .x
                .partial_cmp(&sat_positions[j].x)
                .expect("finite positions")
                .then(i.cmp(&j))
        });
        for (k, &i) in order.iter().enumerate() {
            let pi = &sat_positions[i];
            for &j in &order[k + 1..] {
                let pj = &sat_positions[j];
                let dx = pj.x - pi.x;
                if dx > range {
                    break;
                }
                let dy = pj.y - pi.y;
                let dz = pj.z - pi.z;
                let d_sq = dx * dx + dy * dy + dz * dz;
                if d_sq <= range_sq && d_sq > T::zero() {
                    let (a, b) = (self.sat_nodes[i], self.sat_nodes[j]);
                    edges.push(Edge { a: a.min(b), b: a.max(b), length_m: d_sq.sqrt() * km_to_m });
                }
            }
        }

        for (gs_node, gs_pos, mask) in &self.stations {
            for (i, sat_pos) in sat_positions.iter().enumerate() {
                let slant = gs_pos.distance(sat_pos);
                if slant == T::zero() {
                    continue;
                }
                if elevation_angle(gs_pos, sat_pos)? >= *mask {
                    let s = self.sat_nodes[i];
                    edges.push(Edge { a: s.min(*gs_node), b: s.max(*gs_node), length_m: slant * km_to_m });
                }
            }
        }

        TopologySnapshot::with_table(slot_index, Arc::clone(&self.table), edges)
    }
}

/// One-shot snapshot construction from named satellite positions.
pub fn build_snapshot<T: Scalar>(
    positions: &[(NodeRef, Position3D<T>)],
    stations: &[GroundStation<T>],
    lisl_range_km: T,
    slot_index: usize,
) -> Result<TopologySnapshot<T>> {
    if positions.is_empty() {
        return Err(Error::Config("build_snapshot needs at least one satellite position".into()));
    }
    if let Some((node, _)) = positions.iter().find(|(n, _)| n.is_ground_station()) {
        return Err(Error::Config(format!(
            "station '{}' must be passed as a GroundStation, not a position",
            node.id
        )));
    }
    let ids: Vec<String> = positions.iter().map(|(n, _)| n.id.clone()).collect();
    let coords: Vec<Position3D<T>> = positions.iter().map(|(_, p)| *p).collect();
    SnapshotBuilder::new(&ids, stations, lisl_range_km)?.build(slot_index, &coords)
}
