//! Safety-filtered pursuit of a moving target.
//!
//! A follower vehicle tracks an erratically moving target with a simple
//! proportional velocity controller. Between that controller and the
//! plant sits a control-barrier-function safety filter: a one-constraint
//! quadratic program, solved in closed form, that minimally modifies the
//! desired velocity so the inter-vehicle distance never drops below a
//! configured minimum. A deterministic discrete-time simulator drives the
//! loop through scripted target trajectories and supports alpha and
//! sensing-latency sweeps.
//!
//! Layout:
//! - [`vec3`]: small 3-vector type and line-of-sight helpers.
//! - [`params`]: filter parameters and the per-step log record.
//! - [`kernel`]: barrier value and gradient, constraint assembly, the
//!   closed-form QP, and the composed per-step filter.
//! - [`tracking`]: the nominal pursuit controller.
//! - [`plant`]: ideal and first-order-lag follower plants.
//! - [`target`]: scripted target trajectories.
//! - [`sim`]: the closed-loop runner, metrics, and sweep harnesses.

pub mod kernel;
pub mod params;
pub mod plant;
pub mod sim;
pub mod target;
pub mod tracking;
pub mod vec3;

pub use kernel::{
    barrier_gradient, barrier_value, cbf_constraint, filter_pipeline, solve_filter_qp,
    FilterDecision, HalfspaceConstraint, KernelError,
};
pub use params::{FilterMode, FilterParams, StepRecord, ValidationError};
pub use plant::{step_follower, FollowerState, PlantModel, PlantParams};
pub use sim::{
    alpha_sweep, latency_sweep, run_scenario, summarize, Metrics, ScenarioConfig, SimError, SimLog,
};
pub use target::{EmptyPath, ScriptKind, TargetScript};
pub use tracking::desired_velocity;
pub use vec3::{distance, unit_toward, DegenerateSeparation, Vec3, MIN_SEPARATION};
