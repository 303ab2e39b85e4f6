//! Barrier geometry, constraint assembly, and the closed-form safety QP.
//!
//! The safe set is the set of relative states with
//! `h = ||x2 - x1|| - d_min >= 0`, where `x1` is the follower position and
//! `x2` the target position. A velocity command `u` for the follower is
//! admissible when the barrier rate satisfies `hdot >= -alpha * h`. For a
//! velocity-controlled plant that condition is a single linear halfspace
//! `a . u >= b` in command space, and the safety filter returns the
//! Euclidean projection of the desired command onto it. With one
//! constraint the projection has a closed form from the KKT conditions,
//! so no iterative solver is involved and the filter cost is constant per
//! step.

use crate::params::{FilterMode, FilterParams};
use crate::tracking::desired_velocity;
use crate::vec3::{distance, unit_toward, DegenerateSeparation, Vec3};
use thiserror::Error;

/// A constraint direction with norm at or below this is treated as
/// carrying no information; paired with a meaningfully positive bound it
/// makes the constraint unsatisfiable.
pub const VACUOUS_DIRECTION_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error(transparent)]
    DegenerateSeparation(#[from] DegenerateSeparation),
    /// Target-aware mode needs a target velocity estimate.
    #[error("target velocity estimate required in target-aware mode")]
    MissingTargetVelocity,
    /// The constraint direction is numerically zero but the bound is
    /// positive, so no command can satisfy it. Callers should treat this
    /// as an emergency stop.
    #[error("constraint direction is numerically zero with positive bound {bound}")]
    InfeasibleConstraint { bound: f64 },
}

/// Linear constraint on velocity commands; the feasible set is
/// `{ u : a . u >= b }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfspaceConstraint {
    /// Constraint coefficients (dimensionless per-axis weights).
    pub a: Vec3,
    /// Lower bound on `a . u` (m/s scale).
    pub b: f64,
}

/// Outcome of filtering one desired command.
///
/// For a genuine QP solve the KKT conditions hold: `slack >= 0` up to
/// rounding, a modified command sits on the constraint boundary with
/// `dual > 0`, and an unmodified one has `dual = 0`. The emergency hold
/// produced by [`filter_pipeline`] on degenerate geometry is the one
/// exception: it reports `was_modified = true` with `dual = 0` because no
/// constraint could be formed at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterDecision {
    /// Filtered velocity command (m/s).
    pub u_star: Vec3,
    /// Whether the filter changed the command.
    pub was_modified: bool,
    /// Constraint slack `a . u_star - b` at the returned command (m/s).
    pub slack: f64,
    /// KKT multiplier of the constraint; positive iff it is active.
    pub dual: f64,
}

/// Barrier value `h = ||x2 - x1|| - d_min`.
///
/// Positive inside the safe set, zero on its boundary, negative outside.
pub fn barrier_value(x1: Vec3, x2: Vec3, d_min: f64) -> f64 {
    distance(x1, x2) - d_min
}

/// Gradient of the barrier with respect to the follower position,
/// `-(x2 - x1) / lambda`. Unit norm whenever defined.
///
/// Moving the follower toward the target decreases `h`, so the gradient
/// points away from the target.
pub fn barrier_gradient(x1: Vec3, x2: Vec3) -> Result<Vec3, DegenerateSeparation> {
    Ok(-unit_toward(x1, x2)?)
}

/// Assemble the barrier-rate constraint `a . u >= b` at the current state.
///
/// `a` is the barrier gradient with respect to the follower position. In
/// [`FilterMode::Basic`] the bound is `-alpha * h`; in
/// [`FilterMode::TargetAware`] the target-velocity contribution to the
/// barrier rate is moved to the right-hand side, so the bound becomes
/// `-alpha * h - (x2 - x1) . v_target / lambda`. Either way, `a . u >= b`
/// is exactly `hdot >= -alpha * h` with the corresponding barrier-rate
/// model.
pub fn cbf_constraint(
    x1: Vec3,
    x2: Vec3,
    target_vel: Option<Vec3>,
    params: &FilterParams,
) -> Result<HalfspaceConstraint, KernelError> {
    let a = barrier_gradient(x1, x2)?;
    let h = barrier_value(x1, x2, params.d_min);
    let b = match params.mode {
        FilterMode::Basic => -params.alpha * h,
        FilterMode::TargetAware => {
            let v2 = target_vel.ok_or(KernelError::MissingTargetVelocity)?;
            let lambda = distance(x1, x2);
            -params.alpha * h - (x2 - x1).dot(v2) / lambda
        }
    };
    Ok(HalfspaceConstraint { a, b })
}

/// Project a desired command onto the halfspace `a . u >= b`.
///
/// If `u_des` already satisfies the constraint it is returned unchanged.
/// Otherwise the unique minimizer of `||u - u_des||^2` subject to the
/// constraint is `u_des + ((b - a . u_des) / ||a||^2) a`, the foot of the
/// perpendicular onto the boundary plane.
pub fn solve_filter_qp(
    u_des: Vec3,
    c: &HalfspaceConstraint,
) -> Result<FilterDecision, KernelError> {
    let violation = c.b - c.a.dot(u_des);
    if violation <= 0.0 {
        return Ok(FilterDecision {
            u_star: u_des,
            was_modified: false,
            slack: -violation,
            dual: 0.0,
        });
    }
    let norm_sq = c.a.norm_squared();
    if norm_sq <= VACUOUS_DIRECTION_EPS * VACUOUS_DIRECTION_EPS {
        if c.b > VACUOUS_DIRECTION_EPS {
            return Err(KernelError::InfeasibleConstraint { bound: c.b });
        }
        // Direction and bound are both numerically zero: nothing to enforce.
        return Ok(FilterDecision {
            u_star: u_des,
            was_modified: false,
            slack: -violation,
            dual: 0.0,
        });
    }
    let dual = violation / norm_sq;
    let u_star = u_des + c.a * dual;
    Ok(FilterDecision {
        u_star,
        was_modified: true,
        slack: c.a.dot(u_star) - c.b,
        dual,
    })
}

/// Full per-step filter: desired velocity, constraint, projection.
///
/// Never fails: degenerate geometry (coincident vehicles) and the
/// unreachable infeasible-constraint case both resolve to an emergency
/// hold, `u_star = 0` with `was_modified = true`, because the control
/// loop must always emit a command.
pub fn filter_pipeline(
    x1: Vec3,
    x2: Vec3,
    target_vel: Option<Vec3>,
    params: &FilterParams,
) -> FilterDecision {
    let u_des = desired_velocity(x1, x2, params);
    match cbf_constraint(x1, x2, target_vel, params)
        .and_then(|c| solve_filter_qp(u_des, &c))
    {
        Ok(decision) => decision,
        Err(_) => FilterDecision {
            u_star: Vec3::ZERO,
            was_modified: true,
            slack: 0.0,
            dual: 0.0,
        },
    }
}
