//! Constellation generation, circular two-body propagation, reference
//! frames and spherical-Earth geodesy.

mod constellation;
mod frames;
mod geodesy;

pub use constellation::{
    build_constellation, propagate, ConstellationSpec, SatelliteElement, SatelliteId,
};
pub use frames::{eci_to_ecef, elevation_angle, ground_station_position, Frame, Position3D};
pub use geodesy::{great_circle_distance, haversine_m, max_lisl_range, GroundStation};
