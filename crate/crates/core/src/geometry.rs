//! Apollonius sphere construction and the motion-cone queries built on it.
//!
//! For a pursuer `P` moving at `v_P` and an evader `E` moving at `v_E`, the
//! points the two agents reach simultaneously form a sphere whenever the speed
//! ratio `a = v_E / v_P` differs from one. For `a < 1` the sphere encloses the
//! evader and marks the region the evader reaches first.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Width of the band around the sphere surface that counts as boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Positions closer than this are treated as coincident.
pub const COINCIDENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("pursuer and evader coincide; no dominance boundary exists")]
    CoincidentAgents,
    #[error("speed ratio {0} yields a planar boundary or is not a positive finite number")]
    InvalidRatio(f64),
    #[error("evader speed {evader} must be positive and below pursuer speed {pursuer}")]
    InvalidSpeeds { pursuer: f64, evader: f64 },
    #[error("arcsin argument {0} outside [-1, 1]")]
    Domain(f64),
    #[error("angle undefined for a zero-length vector")]
    ZeroVector,
}

/// A point or displacement in 3D space, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(v: [f64; 3]) -> Self {
        Point3::new(v[0], v[1], v[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        p.to_array()
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, rhs: Point3) {
        *self = *self + rhs;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Evader-to-pursuer speed ratio `v_E / v_P`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct SpeedRatio(f64);

impl SpeedRatio {
    pub fn new(a: f64) -> Result<Self, GeometryError> {
        if a.is_finite() && a > 0.0 {
            Ok(SpeedRatio(a))
        } else {
            Err(GeometryError::InvalidRatio(a))
        }
    }

    pub fn from_speeds(pursuer: f64, evader: f64) -> Result<Self, GeometryError> {
        if !(pursuer > 0.0 && evader > 0.0) || !pursuer.is_finite() || !evader.is_finite() {
            return Err(GeometryError::InvalidSpeeds { pursuer, evader });
        }
        SpeedRatio::new(evader / pursuer)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApolloniusSphere {
    pub center: Point3,
    pub radius: f64,
}

/// Which agent reaches a point first under straight-line motion at full speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    EvaderDominant,
    Boundary,
    PursuerDominant,
}

/// Sphere of points `C` with `|EC| / |PC| = a`.
pub fn apollonius_sphere(
    pursuer: Point3,
    evader: Point3,
    a: SpeedRatio,
) -> Result<ApolloniusSphere, GeometryError> {
    let a = a.value();
    let a2 = a * a;
    let denom = 1.0 - a2;
    if denom.abs() < 1e-12 {
        return Err(GeometryError::InvalidRatio(a));
    }
    let separation = pursuer.distance(evader);
    if separation <= COINCIDENT_TOL {
        return Err(GeometryError::CoincidentAgents);
    }
    let center = (evader - pursuer * a2) * (1.0 / denom);
    let radius = (a / denom).abs() * separation;
    Ok(ApolloniusSphere { center, radius })
}

impl ApolloniusSphere {
    pub fn signed_distance(&self, point: Point3) -> f64 {
        point.distance(self.center) - self.radius
    }

    /// Region tag for a sphere built with `a < 1`, where the interior
    /// belongs to the evader.
    pub fn region_of(&self, point: Point3) -> Region {
        let gap = self.signed_distance(point);
        if gap.abs() <= BOUNDARY_TOL {
            Region::Boundary
        } else if gap < 0.0 {
            Region::EvaderDominant
        } else {
            Region::PursuerDominant
        }
    }
}

/// Classifies `point` against the dominance sphere. Only `a < 1` is
/// meaningful here: the interior is the evader's region.
pub fn dominance(
    point: Point3,
    sphere: &ApolloniusSphere,
    a: SpeedRatio,
) -> Result<Region, GeometryError> {
    if a.value() >= 1.0 {
        return Err(GeometryError::InvalidRatio(a.value()));
    }
    Ok(sphere.region_of(point))
}

/// Half-angle of the pursuer's optimal motion cone around the line of sight,
/// `arcsin(v_E / v_P)`.
pub fn pursuit_cone_halfangle(pursuer_speed: f64, evader_speed: f64) -> Result<f64, GeometryError> {
    if !(evader_speed > 0.0 && evader_speed < pursuer_speed) || !pursuer_speed.is_finite() {
        return Err(GeometryError::InvalidSpeeds {
            pursuer: pursuer_speed,
            evader: evader_speed,
        });
    }
    Ok((evader_speed / pursuer_speed).asin())
}

/// Pursuer angle `alpha_2` at which it meets an evader heading off the line
/// of sight by `alpha_1`: `sin(alpha_1) / sin(alpha_2) = v_P / v_E`.
pub fn alpha2_of_alpha1(
    alpha1: f64,
    pursuer_speed: f64,
    evader_speed: f64,
) -> Result<f64, GeometryError> {
    if !(evader_speed > 0.0 && evader_speed <= pursuer_speed) {
        return Err(GeometryError::InvalidSpeeds {
            pursuer: pursuer_speed,
            evader: evader_speed,
        });
    }
    let arg = evader_speed / pursuer_speed * alpha1.sin();
    if !(-1.0..=1.0).contains(&arg) {
        return Err(GeometryError::Domain(arg));
    }
    Ok(arg.asin())
}

/// Unsigned angle between two vectors, in `[0, pi]`.
pub fn angle_between(u: Point3, v: Point3) -> Result<f64, GeometryError> {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(GeometryError::ZeroVector);
    }
    Ok((u.dot(v) / (nu * nv)).clamp(-1.0, 1.0).acos())
}

/// True when the pursuer's heading lies inside its optimal cone about `P -> E`.
pub fn pursuer_in_cone(
    heading: Point3,
    pursuer: Point3,
    evader: Point3,
    pursuer_speed: f64,
    evader_speed: f64,
) -> Result<bool, GeometryError> {
    let half = pursuit_cone_halfangle(pursuer_speed, evader_speed)?;
    Ok(angle_between(heading, evader - pursuer)? <= half)
}

/// True when the evader's heading makes at least a right angle with `E -> P`.
pub fn evader_in_cone(heading: Point3, pursuer: Point3, evader: Point3) -> Result<bool, GeometryError> {
    Ok(angle_between(heading, pursuer - evader)? >= std::f64::consts::FRAC_PI_2)
}
