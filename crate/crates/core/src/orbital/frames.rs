use std::fmt;

use serde::{Deserialize, Serialize};

use super::geodesy::GroundStation;
use crate::error::{Error, Result};
use crate::scalar::{consts, Scalar};

/// Reference frame of a [`Position3D`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// Earth-centred inertial.
    Eci,
    /// Earth-centred Earth-fixed.
    Ecef,
}

impl Frame {
    pub fn as_str(self) -> &'static str {
        match self {
            Frame::Eci => "ECI",
            Frame::Ecef => "ECEF",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Cartesian position in kilometres, tagged with its frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3D<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub frame: Frame,
}

impl<T: Scalar> Position3D<T> {
    pub fn new(x: T, y: T, z: T, frame: Frame) -> Self {
        Self { x, y, z, frame }
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Euclidean distance, km. Frames are assumed to match.
    pub fn distance(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    fn expect_frame(&self, expected: Frame) -> Result<()> {
        if self.frame == expected {
            Ok(())
        } else {
            Err(Error::Frame {
                expected: expected.as_str(),
                actual: self.frame.as_str(),
            })
        }
    }
}

/// Rotates an inertial position into the Earth-fixed frame at `t` seconds.
pub fn eci_to_ecef<T: Scalar>(pos: &Position3D<T>, t: T) -> Result<Position3D<T>> {
    pos.expect_frame(Frame::Eci)?;
    let theta = T::lit(consts::EARTH_ROTATION_RAD_S) * t;
    let (s, c) = theta.sin_cos();
    Ok(Position3D::new(
        c * pos.x + s * pos.y,
        c * pos.y - s * pos.x,
        pos.z,
        Frame::Ecef,
    ))
}

/// Earth-fixed position of a ground station on the spherical Earth.
pub fn ground_station_position<T: Scalar>(gs: &GroundStation<T>) -> Position3D<T> {
    let r = T::lit(consts::EARTH_RADIUS_KM) + gs.altitude_m / T::lit(1000.0);
    let (sin_lat, cos_lat) = gs.latitude_deg.to_radians().sin_cos();
    let (sin_lon, cos_lon) = gs.longitude_deg.to_radians().sin_cos();
    Position3D::new(
        r * cos_lat * cos_lon,
        r * cos_lat * sin_lon,
        r * sin_lat,
        Frame::Ecef,
    )
}

/// Elevation of `sat_pos` above the local horizontal plane at `gs_pos`, degrees.
pub fn elevation_angle<T: Scalar>(gs_pos: &Position3D<T>, sat_pos: &Position3D<T>) -> Result<T> {
    gs_pos.expect_frame(Frame::Ecef)?;
    sat_pos.expect_frame(Frame::Ecef)?;
    let gs_norm = gs_pos.norm();
    if gs_norm == T::zero() {
        return Err(Error::Domain("elevation angle: station position is the origin".into()));
    }
    let range = gs_pos.distance(sat_pos);
    if range == T::zero() {
        return Err(Error::Domain("elevation angle: station and satellite coincide".into()));
    }
    let los = Position3D::new(
        sat_pos.x - gs_pos.x,
        sat_pos.y - gs_pos.y,
        sat_pos.z - gs_pos.z,
        Frame::Ecef,
    );
    // atan2 of the along-radial and cross-radial components stays accurate near zenith
    let along = los.dot(gs_pos);
    let cx = los.y * gs_pos.z - los.z * gs_pos.y;
    let cy = los.z * gs_pos.x - los.x * gs_pos.z;
    let cz = los.x * gs_pos.y - los.y * gs_pos.x;
    let across = (cx * cx + cy * cy + cz * cz).sqrt();
    Ok(along.atan2(across).to_degrees())
}
