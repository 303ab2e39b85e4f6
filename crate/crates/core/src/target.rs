//! Scripted target trajectories.
//!
//! Three closed-form motion patterns cover the scenario suite: a straight
//! run along +x, a straight run along -x (the target heading back toward
//! the follower), and a constant-speed traversal of a piecewise-linear
//! waypoint path. Positions are exact functions of time, so delayed
//! sensing can evaluate the script at any past instant without
//! interpolation artifacts.

use crate::params::ValidationError;
use crate::vec3::{distance, Vec3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A waypoint script has no waypoints to traverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("waypoint path is empty")]
pub struct EmptyPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScriptKind {
    /// Constant velocity along +x between `t_start` and `t_stop`.
    #[serde(rename = "straight_forward")]
    StraightForward,
    /// Constant velocity along -x, i.e. toward a follower positioned in -x.
    #[serde(rename = "straight_backward")]
    StraightBackward,
    /// Constant-speed traversal of the waypoint polyline.
    #[serde(rename = "multi_turn")]
    MultiTurn,
    /// Same traversal, with waypoints supplied by a config file.
    #[serde(rename = "from_file")]
    FromFile,
}

/// Deterministic target motion script.
///
/// Straight scripts move from `start` during `[t_start, t_stop]` and hold
/// position outside that window. Waypoint scripts begin at the first
/// waypoint at `t_start`, traverse the polyline at `speed`, and hold the
/// final waypoint after arrival; `start` and `t_stop` play no role for
/// them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetScript {
    pub kind: ScriptKind,
    /// Travel speed (m/s).
    pub speed: f64,
    pub start: Vec3,
    pub waypoints: Vec<Vec3>,
    pub t_start: f64,
    pub t_stop: f64,
}

impl TargetScript {
    pub fn straight_forward(start: Vec3, speed: f64, t_start: f64, t_stop: f64) -> Self {
        TargetScript { kind: ScriptKind::StraightForward, speed, start, waypoints: Vec::new(), t_start, t_stop }
    }

    pub fn straight_backward(start: Vec3, speed: f64, t_start: f64, t_stop: f64) -> Self {
        TargetScript { kind: ScriptKind::StraightBackward, speed, start, waypoints: Vec::new(), t_start, t_stop }
    }

    pub fn multi_turn(waypoints: Vec<Vec3>, speed: f64, t_start: f64) -> Self {
        let start = waypoints.first().copied().unwrap_or(Vec3::ZERO);
        TargetScript { kind: ScriptKind::MultiTurn, speed, start, waypoints, t_start, t_stop: t_start }
    }

    /// Default multi-turn path: a 10 m square with a climbing final leg,
    /// traversed at 1.5 m/s.
    pub fn default_multi_turn() -> Self {
        Self::multi_turn(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(10.0, 0.0, 0.0),
                Vec3::new(10.0, 10.0, 0.0),
                Vec3::new(0.0, 10.0, 0.0),
                Vec3::new(0.0, 0.0, 5.0),
            ],
            1.5,
            0.0,
        )
    }

    fn uses_waypoints(&self) -> bool {
        matches!(self.kind, ScriptKind::MultiTurn | ScriptKind::FromFile)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.speed >= 0.0) || !self.speed.is_finite() {
            return Err(ValidationError(format!("speed must be >= 0 (got {})", self.speed)));
        }
        if self.t_stop < self.t_start {
            return Err(ValidationError(format!(
                "t_stop must be >= t_start (got {} < {})",
                self.t_stop, self.t_start
            )));
        }
        if !self.start.is_finite() || !self.t_start.is_finite() {
            return Err(ValidationError("script start state must be finite".into()));
        }
        if self.uses_waypoints() {
            if self.waypoints.is_empty() {
                return Err(ValidationError("waypoint scripts need at least one waypoint".into()));
            }
            if self.waypoints.iter().any(|w| !w.is_finite()) {
                return Err(ValidationError("waypoints must be finite".into()));
            }
        }
        Ok(())
    }

    fn axis(&self) -> Vec3 {
        match self.kind {
            ScriptKind::StraightForward => Vec3::new(1.0, 0.0, 0.0),
            ScriptKind::StraightBackward => Vec3::new(-1.0, 0.0, 0.0),
            _ => Vec3::ZERO,
        }
    }

    /// Target position at time `t`.
    pub fn position(&self, t: f64) -> Result<Vec3, EmptyPath> {
        if !self.uses_waypoints() {
            let t_eff = t.clamp(self.t_start, self.t_stop);
            return Ok(self.start + self.axis() * (self.speed * (t_eff - self.t_start)));
        }
        if self.waypoints.is_empty() {
            return Err(EmptyPath);
        }
        let mut travelled = if t > self.t_start { self.speed * (t - self.t_start) } else { 0.0 };
        for pair in self.waypoints.windows(2) {
            let len = distance(pair[0], pair[1]);
            if travelled < len {
                return Ok(pair[0] + (pair[1] - pair[0]) * (travelled / len));
            }
            travelled -= len;
        }
        Ok(*self.waypoints.last().expect("non-empty"))
    }

    /// Exact piecewise-constant target velocity at time `t`.
    ///
    /// Zero while holding; on a leg, the leg direction times `speed`. At a
    /// boundary instant the upcoming leg's velocity is returned.
    pub fn velocity(&self, t: f64) -> Result<Vec3, EmptyPath> {
        if !self.uses_waypoints() {
            if t < self.t_start || t >= self.t_stop || self.speed == 0.0 {
                return Ok(Vec3::ZERO);
            }
            return Ok(self.axis() * self.speed);
        }
        if self.waypoints.is_empty() {
            return Err(EmptyPath);
        }
        if t < self.t_start || self.speed == 0.0 {
            return Ok(Vec3::ZERO);
        }
        let mut travelled = self.speed * (t - self.t_start);
        for pair in self.waypoints.windows(2) {
            let len = distance(pair[0], pair[1]);
            // Half-open leg interval: at a shared boundary the next leg wins.
            if travelled < len {
                return Ok((pair[1] - pair[0]) * (self.speed / len));
            }
            travelled -= len;
        }
        Ok(Vec3::ZERO)
    }

    /// Total polyline length for waypoint scripts, zero otherwise.
    pub fn path_length(&self) -> f64 {
        self.waypoints.windows(2).map(|p| distance(p[0], p[1])).sum()
    }
}
