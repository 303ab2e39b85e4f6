//! Minimal 3-vector arithmetic for positions (m) and velocities (m/s).

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

/// Separations below this (in meters) leave the line-of-sight direction
/// undefined. Far below any physically meaningful inter-vehicle distance.
pub const MIN_SEPARATION: f64 = 1e-6;

/// Two points are closer than [`MIN_SEPARATION`]; callers must treat the
/// geometry as an emergency state rather than divide by the separation.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("separation {separation} m is below the degeneracy threshold {MIN_SEPARATION} m")]
pub struct DegenerateSeparation {
    pub separation: f64,
}

/// 3D vector. Components are meters for positions, m/s for velocities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Clamp each component to `[-limit, limit]`.
    pub fn clamp_abs(self, limit: f64) -> Vec3 {
        Vec3::new(
            self.x.clamp(-limit, limit),
            self.y.clamp(-limit, limit),
            self.z.clamp(-limit, limit),
        )
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, rhs: Vec3) {
        *self = *self + rhs;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, rhs: f64) -> Vec3 {
        Vec3::new(self.x * rhs, self.y * rhs, self.z * rhs)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Euclidean distance between two points.
pub fn distance(a: Vec3, b: Vec3) -> f64 {
    (b - a).norm()
}

/// Unit vector pointing from `from` to `to`.
///
/// Fails with [`DegenerateSeparation`] when the points are closer than
/// [`MIN_SEPARATION`].
pub fn unit_toward(from: Vec3, to: Vec3) -> Result<Vec3, DegenerateSeparation> {
    let sep = distance(from, to);
    if sep <= MIN_SEPARATION {
        return Err(DegenerateSeparation { separation: sep });
    }
    Ok((to - from) * (1.0 / sep))
}
