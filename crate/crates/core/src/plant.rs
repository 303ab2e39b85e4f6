//! Discrete-time follower plant.
//!
//! Two velocity-command plants are provided: an ideal single integrator
//! where commands take effect instantly, and a first-order lag that stands
//! in for an autopilot's inner velocity loop.

use crate::params::ValidationError;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlantModel {
    /// Commands take effect instantly: `vel' = u`.
    #[serde(rename = "ideal")]
    Ideal,
    /// First-order velocity lag with time constant `tau`.
    #[serde(rename = "lag")]
    FirstOrderLag,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantParams {
    pub model: PlantModel,
    /// Lag time constant (s); only used by [`PlantModel::FirstOrderLag`].
    pub tau: f64,
    /// Integration step (s).
    pub dt: f64,
}

impl Default for PlantParams {
    fn default() -> Self {
        PlantParams { model: PlantModel::Ideal, tau: 0.3, dt: 0.01 }
    }
}

impl PlantParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(ValidationError(format!("dt must be > 0 (got {})", self.dt)));
        }
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(ValidationError(format!("tau must be > 0 (got {})", self.tau)));
        }
        if self.model == PlantModel::FirstOrderLag && self.dt >= self.tau {
            return Err(ValidationError(format!(
                "dt must be < tau for the lag plant (dt = {}, tau = {})",
                self.dt, self.tau
            )));
        }
        Ok(())
    }
}

/// Follower position plus the realized inner-loop velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerState {
    pub pos: Vec3,
    pub vel: Vec3,
}

impl FollowerState {
    pub fn at_rest(pos: Vec3) -> Self {
        FollowerState { pos, vel: Vec3::ZERO }
    }
}

/// Advance the follower one step under velocity command `u`.
///
/// Ideal: `vel' = u`, `pos' = pos + u * dt`.
/// First-order lag: `vel' = vel + (dt / tau) * (u - vel)`,
/// `pos' = pos + vel' * dt` (explicit update, stable for `dt < tau`).
pub fn step_follower(s: FollowerState, u: Vec3, p: &PlantParams) -> FollowerState {
    match p.model {
        PlantModel::Ideal => FollowerState { pos: s.pos + u * p.dt, vel: u },
        PlantModel::FirstOrderLag => {
            let vel = s.vel + (u - s.vel) * (p.dt / p.tau);
            FollowerState { pos: s.pos + vel * p.dt, vel }
        }
    }
}
