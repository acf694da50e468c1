//! Scalar abstraction shared by the geometry, routing and metrics code.
//!
//! Everything numeric in this crate is generic over [`Scalar`] so the same
//! code runs in `f64` (the default used by the simulator) and `f32`.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumCast};

/// floating point: f32 or f64
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumCast + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(value: f64) -> Self {
        <Self as NumCast>::from(value).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(count: usize) -> Self {
        <Self as FromPrimitive>::from_usize(count).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Physical constants, in the units used throughout the crate.
pub mod consts {
    /// Mean Earth radius, km.
    pub const EARTH_RADIUS_KM: f64 = 6371.0;
    /// Earth gravitational parameter, km³/s².
    pub const MU_KM3_S2: f64 = 398_600.441_8;
    /// Earth rotation rate, rad/s.
    pub const EARTH_ROTATION_RAD_S: f64 = 7.292_115_9e-5;
    /// Speed of light in vacuum, m/s.
    pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
    /// Propagation speed in optical fiber (refractive index 1.4675), m/s.
    pub const FIBER_SPEED_M_S: f64 = 204_287_876.0;
    /// Height of the atmosphere shell that laser links must clear, km.
    pub const ATMOSPHERE_HEIGHT_KM: f64 = 80.0;
}
