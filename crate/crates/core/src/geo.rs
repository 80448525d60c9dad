//! Great-circle geometry over any floating point scalar.

use num_traits::{Float, FloatConst};
use std::fmt;

/// Mean Earth radius used by every distance computation, in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Scalar types usable for coordinates and distances.
pub trait Scalar: Float + FloatConst + fmt::Debug + fmt::Display {}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum GeoError {
    #[error("latitude {0} is outside [-90, 90]")]
    Latitude(f64),
    #[error("longitude {0} is outside [-180, 180]")]
    Longitude(f64),
}

/// A WGS84-style coordinate pair in degrees. Ranges are checked on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    lat: T,
    lon: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(latitude: T, longitude: T) -> Result<Self, GeoError> {
        let ninety = T::from(90.0).unwrap();
        let one_eighty = T::from(180.0).unwrap();
        if !latitude.is_finite() || latitude.abs() > ninety {
            return Err(GeoError::Latitude(latitude.to_f64().unwrap_or(f64::NAN)));
        }
        if !longitude.is_finite() || longitude.abs() > one_eighty {
            return Err(GeoError::Longitude(longitude.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Point {
            lat: latitude,
            lon: longitude,
        })
    }

    pub fn latitude(&self) -> T {
        self.lat
    }

    pub fn longitude(&self) -> T {
        self.lon
    }

    /// Haversine distance to `other` in meters.
    pub fn distance_to(&self, other: &Self) -> T {
        haversine(self, other)
    }
}

/// Haversine great-circle distance in meters on a sphere of radius [`EARTH_RADIUS_M`].
///
/// The argument order is canonicalized before computing so that
/// `haversine(a, b)` and `haversine(b, a)` are bit-identical.
pub fn haversine<T: Scalar>(a: &Point<T>, b: &Point<T>) -> T {
    if a == b {
        return T::zero();
    }
    let (p, q) = if (a.lat, a.lon) <= (b.lat, b.lon) {
        (a, b)
    } else {
        (b, a)
    };
    let two = T::one() + T::one();
    let radius = T::from(EARTH_RADIUS_M).unwrap();
    let phi1 = p.lat.to_radians();
    let phi2 = q.lat.to_radians();
    let half_dphi = (q.lat - p.lat).to_radians() / two;
    let half_dlambda = (q.lon - p.lon).to_radians() / two;
    let h = half_dphi.sin().powi(2) + phi1.cos() * phi2.cos() * half_dlambda.sin().powi(2);
    // rounding can push h marginally past 1 for antipodes
    let h = h.min(T::one()).max(T::zero());
    two * radius * h.sqrt().asin()
}

/// Strict threshold test: a distance passes only when it is below the threshold.
pub fn filter_within<T: Scalar>(distance: T, threshold: T) -> bool {
    distance < threshold
}
