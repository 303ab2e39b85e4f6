//! Proportional pursuit controller producing the desired velocity that
//! the safety filter then screens.

use crate::params::FilterParams;
use crate::vec3::Vec3;

/// Desired velocity `(x2 - x1) * v_max`, optionally clamped per axis to
/// `[-v_max, v_max]` so `v_max` also acts as the speed ceiling in each
/// direction.
pub fn desired_velocity(x1: Vec3, x2: Vec3, params: &FilterParams) -> Vec3 {
    let raw = (x2 - x1) * params.v_max;
    if params.clamp_desired {
        raw.clamp_abs(params.v_max)
    } else {
        raw
    }
}
