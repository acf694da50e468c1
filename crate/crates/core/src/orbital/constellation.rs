use std::fmt;

use serde::{Deserialize, Serialize};

use super::frames::{Frame, Position3D};
use crate::error::{Error, Result};
use crate::scalar::{consts, Scalar};

/// Geometry of a single Walker-delta shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct ConstellationSpec<T> {
    pub num_planes: usize,
    pub sats_per_plane: usize,
    pub inclination_deg: T,
    /// Altitude above the mean Earth radius, km.
    pub altitude_km: T,
    /// Walker phasing factor F; adjacent planes are offset by 2πF/(P·S).
    #[serde(default)]
    pub phasing_factor: usize,
    /// Total RAAN span covered by the planes, degrees.
    #[serde(default = "default_raan_spread")]
    pub raan_spread_deg: T,
    /// Scenario time origin, seconds.
    #[serde(default)]
    pub epoch_s: T,
}

fn default_raan_spread<T: Scalar>() -> T {
    T::lit(360.0)
}

impl<T: Scalar> ConstellationSpec<T> {
    /// Starlink Phase I (version 2) first shell: 24 × 66 at 53°, 550 km.
    pub fn starlink_phase1() -> Self {
        Self {
            num_planes: 24,
            sats_per_plane: 66,
            inclination_deg: T::lit(53.0),
            altitude_km: T::lit(550.0),
            phasing_factor: 0,
            raan_spread_deg: T::lit(360.0),
            epoch_s: T::zero(),
        }
    }

    pub fn total_satellites(&self) -> usize {
        self.num_planes * self.sats_per_plane
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_planes < 1 {
            return Err(Error::Config("constellation: num_planes must be >= 1".into()));
        }
        if self.sats_per_plane < 1 {
            return Err(Error::Config("constellation: sats_per_plane must be >= 1".into()));
        }
        let inc = self.inclination_deg;
        if !(inc >= T::zero() && inc <= T::lit(180.0)) {
            return Err(Error::Config(format!(
                "constellation: inclination_deg must lie in [0, 180], got {inc}"
            )));
        }
        if self.phasing_factor >= self.num_planes {
            return Err(Error::Config(format!(
                "constellation: phasing_factor must be < num_planes ({}), got {}",
                self.num_planes, self.phasing_factor
            )));
        }
        if !(self.altitude_km > T::zero()) || !self.altitude_km.is_finite() {
            return Err(Error::Config(format!(
                "constellation: altitude_km must be > 0, got {}",
                self.altitude_km
            )));
        }
        if !self.raan_spread_deg.is_finite() {
            return Err(Error::Config("constellation: raan_spread_deg must be finite".into()));
        }
        if !self.epoch_s.is_finite() || self.epoch_s < T::zero() {
            return Err(Error::Config("constellation: epoch_s must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// Deterministic satellite identifier: plane index and in-plane index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SatelliteId {
    pub plane: usize,
    pub index: usize,
}

impl fmt::Display for SatelliteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{:02}-S{:02}", self.plane, self.index)
    }
}

/// Orbital elements of one satellite on a circular orbit. Angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatelliteElement<T> {
    pub id: SatelliteId,
    pub raan: T,
    pub inclination: T,
    /// Argument of latitude at epoch.
    pub initial_phase: T,
    /// Earth radius plus altitude, km.
    pub orbital_radius: T,
    /// Mean motion, rad/s.
    pub angular_rate: T,
}

impl<T: Scalar> SatelliteElement<T> {
    pub fn period_s(&self) -> T {
        T::TAU() / self.angular_rate
    }
}

/// Expands a Walker-delta definition into per-satellite elements, plane-major.
pub fn build_constellation<T: Scalar>(spec: &ConstellationSpec<T>) -> Result<Vec<SatelliteElement<T>>> {
    spec.validate()?;
    let planes = spec.num_planes;
    let per_plane = spec.sats_per_plane;
    let tau = T::TAU();
    let radius = T::lit(consts::EARTH_RADIUS_KM) + spec.altitude_km;
    let angular_rate = (T::lit(consts::MU_KM3_S2) / (radius * radius * radius)).sqrt();
    let inclination = spec.inclination_deg.to_radians();
    let raan_step = spec.raan_spread_deg.to_radians() / T::from_count(planes);
    let total = T::from_count(planes * per_plane);

    let mut elements = Vec::with_capacity(planes * per_plane);
    for p in 0..planes {
        let raan = raan_step * T::from_count(p);
        let plane_offset = tau * T::from_count(spec.phasing_factor * p) / total;
        for s in 0..per_plane {
            let in_plane = tau * T::from_count(s) / T::from_count(per_plane);
            elements.push(SatelliteElement {
                id: SatelliteId { plane: p, index: s },
                raan,
                inclination,
                initial_phase: in_plane + plane_offset,
                orbital_radius: radius,
                angular_rate,
            });
        }
    }
    Ok(elements)
}

/// Inertial (ECI) position of `elem` at `t` seconds after epoch.
pub fn propagate<T: Scalar>(elem: &SatelliteElement<T>, t: T) -> Position3D<T> {
    let u = elem.initial_phase + elem.angular_rate * t;
    let (sin_u, cos_u) = u.sin_cos();
    let (sin_o, cos_o) = elem.raan.sin_cos();
    let (sin_i, cos_i) = elem.inclination.sin_cos();
    let r = elem.orbital_radius;
    Position3D::new(
        r * (cos_o * cos_u - sin_o * cos_i * sin_u),
        r * (sin_o * cos_u + cos_o * cos_i * sin_u),
        r * (sin_i * sin_u),
        Frame::Eci,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(planes: usize, per_plane: usize, phasing: usize) -> ConstellationSpec<f64> {
        ConstellationSpec {
            num_planes: planes,
            sats_per_plane: per_plane,
            inclination_deg: 53.0,
            altitude_km: 550.0,
            phasing_factor: phasing,
            raan_spread_deg: 360.0,
            epoch_s: 0.0,
        }
    }

    #[test]
    fn starlink_shell_has_1584_satellites() {
        let elems = build_constellation(&ConstellationSpec::<f64>::starlink_phase1()).unwrap();
        assert_eq!(elems.len(), 1584);
        let mut ids: Vec<String> = elems.iter().map(|e| e.id.to_string()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 1584);
        assert_eq!(elems[0].id.to_string(), "P00-S00");
        assert_eq!(elems[1583].id.to_string(), "P23-S65");
    }

    #[test]
    fn degenerate_constellation() {
        let elems = build_constellation(&spec(1, 1, 0)).unwrap();
        assert_eq!(elems.len(), 1);
        assert_eq!(elems[0].raan, 0.0);
        assert_eq!(elems[0].initial_phase, 0.0);
    }

    #[test]
    fn phasing_offsets_second_plane() {
        let elems = build_constellation(&spec(2, 2, 1)).unwrap();
        let phases: Vec<f64> = elems.iter().map(|e| e.initial_phase).collect();
        let expected = [0.0, PI, PI / 2.0, 3.0 * PI / 2.0];
        for (got, want) in phases.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert_eq!(elems[2].raan, PI);
    }

    #[test]
    fn orbital_radius_and_rate() {
        let elems = build_constellation(&spec(1, 1, 0)).unwrap();
        assert_eq!(elems[0].orbital_radius, 6921.0);
        // Kepler's third law evaluated independently
        let period = 2.0 * PI * (6921.0f64.powi(3) / 398600.4418).sqrt();
        assert!((elems[0].period_s() - period).abs() < 1e-9);
        assert!((period - 5730.13).abs() < 0.01);
    }

    #[test]
    fn invalid_specs_name_the_invariant() {
        let cases = [
            (ConstellationSpec { num_planes: 0, ..spec(1, 1, 0) }, "num_planes"),
            (ConstellationSpec { sats_per_plane: 0, ..spec(1, 1, 0) }, "sats_per_plane"),
            (ConstellationSpec { inclination_deg: 181.0, ..spec(1, 1, 0) }, "inclination"),
            (ConstellationSpec { phasing_factor: 2, ..spec(2, 1, 0) }, "phasing_factor"),
            (ConstellationSpec { altitude_km: 0.0, ..spec(1, 1, 0) }, "altitude"),
        ];
        for (bad, needle) in cases {
            let err = build_constellation(&bad).unwrap_err().to_string();
            assert!(err.contains(needle), "{err}");
        }
    }

    #[test]
    fn equatorial_element_starts_on_x_axis() {
        let elems = build_constellation(&ConstellationSpec { inclination_deg: 0.0, ..spec(1, 1, 0) }).unwrap();
        let p = propagate(&elems[0], 0.0);
        assert_eq!((p.x, p.y, p.z), (6921.0, 0.0, 0.0));
        assert_eq!(p.frame, Frame::Eci);
    }

    #[test]
    fn orbit_closes_after_one_period() {
        let elems = build_constellation(&spec(3, 5, 1)).unwrap();
        for e in &elems {
            let a = propagate(e, 0.0);
            let b = propagate(e, e.period_s());
            assert!(a.distance(&b) < 1e-6);
        }
    }

    #[test]
    fn single_precision_build() {
        let elems = build_constellation(&ConstellationSpec::<f32>::starlink_phase1()).unwrap();
        let p = propagate(&elems[100], 1234.0);
        assert!(((p.norm() - 6921.0) / 6921.0).abs() < 1e-5);
    }
}
