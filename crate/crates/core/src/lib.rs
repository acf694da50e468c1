//! Simulator for the latency cost of laser inter-satellite link (LISL)
//! setup delay in a LEO free-space optical network.
//!
//! The pipeline is: [`orbital`] propagates a Walker shell, [`topology`]
//! turns each time slot into a range-gated graph, [`routing`] finds the
//! station-to-station shortest path per slot and flags route changes, and
//! [`metrics`] reduces the slot series to path change rate, mean latency
//! with and without setup delay, impact and the largest tolerable setup
//! delay against a fiber baseline. [`scenario`] drives whole experiments.
//!
//! All numeric code is generic over [`Scalar`]; the aliases below fix the
//! scalar to `f64`, which is what the simulator uses.

pub mod error;
pub mod metrics;
pub mod orbital;
pub mod routing;
pub mod scalar;
pub mod scenario;
pub mod topology;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ConstellationSpecF64 = orbital::ConstellationSpec<f64>;
pub type SatelliteElementF64 = orbital::SatelliteElement<f64>;
pub type GroundStationF64 = orbital::GroundStation<f64>;
pub type Position3DF64 = orbital::Position3D<f64>;
pub type TopologySnapshotF64 = topology::TopologySnapshot<f64>;
pub type RoutePathF64 = routing::RoutePath<f64>;
pub type SlotResultF64 = routing::SlotResult<f64>;
pub type LatencyParamsF64 = metrics::LatencyParams<f64>;
pub type ScenarioMetricsF64 = metrics::ScenarioMetrics<f64>;
pub type ScenarioConfigF64 = scenario::ScenarioConfig<f64>;
pub type ScenarioResultF64 = scenario::ScenarioResult<f64>;
pub type CellResultF64 = scenario::CellResult<f64>;

pub type ConstellationSpecF32 = orbital::ConstellationSpec<f32>;
pub type Position3DF32 = orbital::Position3D<f32>;
pub type ScenarioConfigF32 = scenario::ScenarioConfig<f32>;
