use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{consts, Scalar};

/// A ground station on the spherical Earth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct GroundStation<T> {
    pub name: String,
    pub latitude_deg: T,
    pub longitude_deg: T,
    #[serde(default)]
    pub altitude_m: T,
    /// Elevation mask for ground-to-satellite links, degrees.
    #[serde(default = "default_min_elevation")]
    pub min_elevation_deg: T,
}

fn default_min_elevation<T: Scalar>() -> T {
    T::lit(25.0)
}

impl<T: Scalar> GroundStation<T> {
    pub fn new(name: impl Into<String>, latitude_deg: T, longitude_deg: T) -> Self {
        Self {
            name: name.into(),
            latitude_deg,
            longitude_deg,
            altitude_m: T::zero(),
            min_elevation_deg: default_min_elevation(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Config(format!("ground station '{}': {what}", self.name)));
        if self.name.trim().is_empty() {
            return Err(Error::Config("ground station name must be nonempty".into()));
        }
        let lat = self.latitude_deg;
        if !(lat >= T::lit(-90.0) && lat <= T::lit(90.0)) {
            return bad(format!("latitude must lie in [-90, 90], got {lat}"));
        }
        let lon = self.longitude_deg;
        if !(lon > T::lit(-180.0) && lon <= T::lit(180.0)) {
            return bad(format!("longitude must lie in (-180, 180], got {lon}"));
        }
        let mask = self.min_elevation_deg;
        if !(mask >= T::zero() && mask < T::lit(90.0)) {
            return bad(format!("min_elevation_deg must lie in [0, 90), got {mask}"));
        }
        if !self.altitude_m.is_finite() {
            return bad("altitude_m must be finite".into());
        }
        Ok(())
    }
}

/// Haversine distance between two latitude/longitude pairs (degrees), metres.
pub fn haversine_m<T: Scalar>(lat1: T, lon1: T, lat2: T, lon2: T) -> T {
    let two = T::lit(2.0);
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let half_dphi = (phi2 - phi1) / two;
    let half_dlambda = (lon2 - lon1).to_radians() / two;
    let h = half_dphi.sin().powi(2) + phi1.cos() * phi2.cos() * half_dlambda.sin().powi(2);
    let central = two * h.sqrt().min(T::one()).asin();
    central * T::lit(consts::EARTH_RADIUS_KM * 1000.0)
}

/// Surface distance between two stations along the great circle, metres.
pub fn great_circle_distance<T: Scalar>(a: &GroundStation<T>, b: &GroundStation<T>) -> T {
    haversine_m(a.latitude_deg, a.longitude_deg, b.latitude_deg, b.longitude_deg)
}

/// Longest chord between two satellites at `altitude_km` that stays above the
/// atmosphere shell of height `atmosphere_height_km`.
pub fn max_lisl_range<T: Scalar>(altitude_km: T, atmosphere_height_km: T) -> Result<T> {
    if !(atmosphere_height_km >= T::zero()) || !(altitude_km > atmosphere_height_km) {
        return Err(Error::Domain(format!(
            "max LISL range needs altitude ({altitude_km} km) > atmosphere height ({atmosphere_height_km} km) >= 0"
        )));
    }
    let earth = T::lit(consts::EARTH_RADIUS_KM);
    let orbit = earth + altitude_km;
    let shell = earth + atmosphere_height_km;
    Ok(T::lit(2.0) * (orbit * orbit - shell * shell).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn same_point_is_zero() {
        let a = GroundStation::new("A", 40.7128, -74.006);
        assert_eq!(great_circle_distance(&a, &a), 0.0);
    }

    #[test]
    fn antipodes_are_half_circumference() {
        let a = GroundStation::new("A", 0.0, 0.0);
        let b = GroundStation::new("B", 0.0, 180.0);
        let d = great_circle_distance(&a, &b);
        assert!((d - PI * 6_371_000.0).abs() < 1e-6);
        assert!((d - 20_015_087.0).abs() < 1.0);
    }

    #[test]
    fn max_range_grazing_atmosphere() {
        let r = max_lisl_range(550.0f64, 80.0).unwrap();
        assert!((r - 5016.0).abs() <= 10.0, "{r}");
        let bare = max_lisl_range(550.0, 0.0).unwrap();
        assert!((bare - 2.0 * (6921.0f64.powi(2) - 6371.0f64.powi(2)).sqrt()).abs() < 1e-9);
        assert!((bare - 5407.62).abs() < 0.01);
    }

    #[test]
    fn max_range_domain() {
        assert!(matches!(max_lisl_range(80.0, 80.0), Err(Error::Domain(_))));
        assert!(matches!(max_lisl_range(50.0, 80.0), Err(Error::Domain(_))));
        assert!(matches!(max_lisl_range(550.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn station_validation() {
        assert!(GroundStation::new("ok", 90.0, 180.0).validate().is_ok());
        assert!(GroundStation::new("lat", 91.0, 0.0).validate().is_err());
        assert!(GroundStation::new("lon", 0.0, -180.0).validate().is_err());
        let mut gs = GroundStation::new("mask", 0.0, 0.0);
        gs.min_elevation_deg = 90.0;
        assert!(gs.validate().unwrap_err().to_string().contains("min_elevation"));
        assert!(GroundStation::new(" ", 0.0, 0.0).validate().is_err());
    }
}
