//! Safety filter parameters and the per-step log record shared by the
//! simulator and the output writers.

use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A parameter bundle failed an invariant; the message names it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct ValidationError(pub String);

/// Which terms enter the barrier-rate estimate used by the filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterMode {
    /// Barrier rate from the follower command only; the target is treated
    /// as stationary when the constraint is assembled.
    #[serde(rename = "basic")]
    Basic,
    /// Adds the target-velocity contribution to the barrier rate so the
    /// bound stays valid while the target itself moves.
    #[serde(rename = "target_aware")]
    TargetAware,
}

/// Parameters of the CBF safety filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterParams {
    /// Minimum inter-vehicle distance to maintain (m).
    pub d_min: f64,
    /// Class-K gain on the barrier (1/s). Larger values let the system
    /// approach the boundary faster.
    pub alpha: f64,
    /// Pursuit gain (1/s) that doubles as the per-axis clamp (m/s) on the
    /// desired velocity.
    pub v_max: f64,
    pub mode: FilterMode,
    /// Clamp each component of the desired velocity to `[-v_max, v_max]`.
    pub clamp_desired: bool,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            d_min: 3.0,
            alpha: 1.0,
            v_max: 2.0,
            mode: FilterMode::Basic,
            clamp_desired: true,
        }
    }
}

impl FilterParams {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.d_min > 0.0) || !self.d_min.is_finite() {
            return Err(ValidationError(format!("d_min must be > 0 (got {})", self.d_min)));
        }
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(ValidationError(format!("alpha must be > 0 (got {})", self.alpha)));
        }
        if !(self.v_max > 0.0) || !self.v_max.is_finite() {
            return Err(ValidationError(format!("v_max must be > 0 (got {})", self.v_max)));
        }
        Ok(())
    }
}

/// One control-loop step as logged by the simulator.
///
/// `lambda` and `h` are ground truth (noise-free); `u_des` is whatever the
/// tracking controller produced from the sensed target position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Simulation time (s).
    pub t: f64,
    pub follower_pos: Vec3,
    pub target_pos: Vec3,
    /// Desired velocity before filtering (m/s).
    pub u_des: Vec3,
    /// Velocity actually commanded after filtering (m/s).
    pub u_star: Vec3,
    /// Barrier value `lambda - d_min` (m).
    pub h: f64,
    /// Inter-vehicle distance (m).
    pub lambda: f64,
    /// True when the filter changed the command beyond 1e-9.
    pub constraint_active: bool,
}
