//! Deterministic closed-loop simulation and experiment harnesses.
//!
//! Each step senses the target (optionally delayed and noisy), runs the
//! tracking controller through the safety filter, advances the plant, and
//! logs ground truth. Runs are fully determined by their config, including
//! the RNG seed, so repeated runs produce bit-identical logs.

use crate::kernel::filter_pipeline;
use crate::params::{FilterMode, FilterParams, StepRecord, ValidationError};
use crate::plant::{step_follower, FollowerState, PlantParams};
use crate::target::{EmptyPath, TargetScript};
use crate::tracking::desired_velocity;
use crate::vec3::{distance, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Commands differing from the desired velocity by more than this norm
/// count as a filter modification in the log.
const ACTIVE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error(transparent)]
    EmptyPath(#[from] EmptyPath),
    #[error("log contains no records")]
    EmptyLog,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub script: TargetScript,
    pub plant: PlantParams,
    pub filter: FilterParams,
    pub follower_start: Vec3,
    /// Run length (s); records span `t = 0` to `t = duration` inclusive.
    pub duration: f64,
    /// Age of the sensed target state (s).
    pub sensing_latency: f64,
    /// Per-axis Gaussian noise on sensed target positions (m).
    pub noise_std: f64,
    pub rng_seed: u64,
    /// Separations at or below this count as a collision (m).
    pub collision_radius: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            script: TargetScript::straight_forward(Vec3::new(5.0, 0.0, 0.0), 1.5, 0.0, 30.0),
            plant: PlantParams::default(),
            filter: FilterParams::default(),
            follower_start: Vec3::ZERO,
            duration: 30.0,
            sensing_latency: 0.0,
            noise_std: 0.0,
            rng_seed: 0,
            collision_radius: 0.5,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        self.script.validate()?;
        self.plant.validate()?;
        self.filter.validate()?;
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return Err(ValidationError(format!("duration must be > 0 (got {})", self.duration)));
        }
        if !(self.sensing_latency >= 0.0) || !self.sensing_latency.is_finite() {
            return Err(ValidationError(format!(
                "sensing_latency must be >= 0 (got {})",
                self.sensing_latency
            )));
        }
        if !(self.noise_std >= 0.0) || !self.noise_std.is_finite() {
            return Err(ValidationError(format!("noise_std must be >= 0 (got {})", self.noise_std)));
        }
        if !(self.collision_radius >= 0.0) || !self.collision_radius.is_finite() {
            return Err(ValidationError(format!(
                "collision_radius must be >= 0 (got {})",
                self.collision_radius
            )));
        }
        if !self.follower_start.is_finite() {
            return Err(ValidationError("follower_start must be finite".into()));
        }
        Ok(())
    }
}

/// Time-ordered step records plus the config that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    pub records: Vec<StepRecord>,
    pub config: ScenarioConfig,
}

/// Summary statistics of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Mean inter-vehicle distance over the whole run (m).
    pub lambda_mean: f64,
    pub lambda_min: f64,
    pub h_min: f64,
    /// True when `lambda_min` dropped to the collision radius or below.
    pub collision: bool,
    /// Seconds from target-motion onset until the follower's realized
    /// speed first exceeds 10% of the target speed; `None` if it never
    /// does.
    pub response_time: Option<f64>,
    /// Mean inter-vehicle distance over the final 20% of records (m).
    pub steady_state_lambda: f64,
}

/// Run one scenario to completion.
///
/// Steps `t = 0, dt, ..., duration`. Sensing evaluates the script at
/// `t - sensing_latency` (clamped at zero) and adds seeded Gaussian noise
/// to the position; logged distances use ground truth.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SimLog, SimError> {
    cfg.validate()?;
    let dt = cfg.plant.dt;
    // Tolerant floor so durations that are exact multiples of dt in
    // decimal stay exact despite binary rounding.
    let n_steps = (cfg.duration / dt + 1e-9).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let noise = if cfg.noise_std > 0.0 {
        Some(Normal::new(0.0, cfg.noise_std).expect("validated std"))
    } else {
        None
    };
    let mut follower = FollowerState::at_rest(cfg.follower_start);
    let mut records = Vec::with_capacity(n_steps + 1);

    for k in 0..=n_steps {
        let t = k as f64 * dt;
        let t_sensed = (t - cfg.sensing_latency).max(0.0);
        let mut sensed_pos = cfg.script.position(t_sensed)?;
        if let Some(n) = &noise {
            sensed_pos += Vec3::new(n.sample(&mut rng), n.sample(&mut rng), n.sample(&mut rng));
        }
        let sensed_vel = match cfg.filter.mode {
            FilterMode::TargetAware => Some(cfg.script.velocity(t_sensed)?),
            FilterMode::Basic => None,
        };

        let u_des = desired_velocity(follower.pos, sensed_pos, &cfg.filter);
        let decision = filter_pipeline(follower.pos, sensed_pos, sensed_vel, &cfg.filter);

        let true_pos = cfg.script.position(t)?;
        let lambda = distance(follower.pos, true_pos);
        records.push(StepRecord {
            t,
            follower_pos: follower.pos,
            target_pos: true_pos,
            u_des,
            u_star: decision.u_star,
            h: lambda - cfg.filter.d_min,
            lambda,
            constraint_active: (decision.u_star - u_des).norm() > ACTIVE_EPS,
        });

        follower = step_follower(follower, decision.u_star, &cfg.plant);
    }

    Ok(SimLog { records, config: cfg.clone() })
}

/// Reduce a log to summary metrics.
pub fn summarize(log: &SimLog) -> Result<Metrics, SimError> {
    let records = &log.records;
    if records.is_empty() {
        return Err(SimError::EmptyLog);
    }
    let n = records.len();
    let lambda_mean = records.iter().map(|r| r.lambda).sum::<f64>() / n as f64;
    let lambda_min = records.iter().map(|r| r.lambda).fold(f64::INFINITY, f64::min);
    let h_min = records.iter().map(|r| r.h).fold(f64::INFINITY, f64::min);
    let tail_start = n * 4 / 5;
    let tail = &records[tail_start..];
    let steady_state_lambda = tail.iter().map(|r| r.lambda).sum::<f64>() / tail.len() as f64;

    // Realized speed over [t_k, t_k+1] recovered exactly from consecutive
    // positions; this matches the plant's internal velocity state.
    let threshold = 0.1 * log.config.script.speed;
    let t_start = log.config.script.t_start;
    let mut response_time = None;
    for pair in records.windows(2) {
        let span = pair[1].t - pair[0].t;
        if pair[0].t < t_start - 1e-12 || span <= 0.0 {
            continue;
        }
        let speed = distance(pair[0].follower_pos, pair[1].follower_pos) / span;
        if speed > threshold {
            response_time = Some(pair[0].t - t_start);
            break;
        }
    }

    Ok(Metrics {
        lambda_mean,
        lambda_min,
        h_min,
        collision: lambda_min <= log.config.collision_radius,
        response_time,
        steady_state_lambda,
    })
}

/// Re-run the base scenario once per alpha value, same seed throughout.
pub fn alpha_sweep(base: &ScenarioConfig, alphas: &[f64]) -> Result<Vec<(f64, Metrics)>, SimError> {
    if alphas.is_empty() {
        return Err(ValidationError("alpha sweep needs at least one value".into()).into());
    }
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(ValidationError(format!("alpha must be > 0 (got {alpha})")).into());
        }
        let mut cfg = base.clone();
        cfg.filter.alpha = alpha;
        let metrics = summarize(&run_scenario(&cfg)?)?;
        rows.push((alpha, metrics));
    }
    Ok(rows)
}

/// Re-run the base scenario once per sensing latency (seconds).
pub fn latency_sweep(
    base: &ScenarioConfig,
    latencies: &[f64],
) -> Result<Vec<(f64, Metrics)>, SimError> {
    if latencies.is_empty() {
        return Err(ValidationError("latency sweep needs at least one value".into()).into());
    }
    let mut rows = Vec::with_capacity(latencies.len());
    for &latency in latencies {
        if !(latency >= 0.0) || !latency.is_finite() {
            return Err(ValidationError(format!("latency must be >= 0 (got {latency})")).into());
        }
        let mut cfg = base.clone();
        cfg.sensing_latency = latency;
        let metrics = summarize(&run_scenario(&cfg)?)?;
        rows.push((latency, metrics));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk_log(lambdas: &[f64]) -> SimLog {
        let config = ScenarioConfig::default();
        let records = lambdas
            .iter()
            .enumerate()
            .map(|(k, &lambda)| StepRecord {
                t: k as f64 * config.plant.dt,
                follower_pos: Vec3::ZERO,
                target_pos: Vec3::new(lambda, 0.0, 0.0),
                u_des: Vec3::ZERO,
                u_star: Vec3::ZERO,
                h: lambda - config.filter.d_min,
                lambda,
                constraint_active: false,
            })
            .collect();
        SimLog { records, config }
    }

    #[test]
    fn summarize_basic_statistics() {
        let m = summarize(&mk_log(&[3.0, 4.0, 5.0])).unwrap();
        assert_eq!(m.lambda_mean, 4.0);
        assert_eq!(m.lambda_min, 3.0);
        assert_eq!(m.h_min, 0.0);
        assert!(!m.collision);
    }

    #[test]
    fn summarize_all_at_boundary() {
        let m = summarize(&mk_log(&[3.0, 3.0, 3.0])).unwrap();
        assert_eq!(m.lambda_mean, 3.0);
        assert_eq!(m.lambda_min, 3.0);
        assert!(!m.collision); // collision_radius 0.5 < d_min
    }

    #[test]
    fn summarize_flags_collision() {
        let m = summarize(&mk_log(&[3.0, 0.3, 4.0])).unwrap();
        assert!(m.collision);
    }

    #[test]
    fn summarize_rejects_empty_log() {
        let log = SimLog { records: Vec::new(), config: ScenarioConfig::default() };
        assert_eq!(summarize(&log), Err(SimError::EmptyLog));
    }

    #[test]
    fn run_produces_expected_record_count_and_spacing() {
        let cfg = ScenarioConfig {
            duration: 2.0,
            plant: PlantParams { dt: 0.1, ..Default::default() },
            ..Default::default()
        };
        let log = run_scenario(&cfg).unwrap();
        assert_eq!(log.records.len(), 21);
        for pair in log.records.windows(2) {
            assert!(pair[1].t > pair[0].t);
            assert!((pair[1].t - pair[0].t - 0.1).abs() < 1e-12);
        }
    }

    #[test]
    fn records_keep_lambda_and_activity_consistent() {
        let cfg = ScenarioConfig {
            script: TargetScript::straight_backward(Vec3::new(6.0, 0.0, 0.0), 1.0, 0.0, 20.0),
            duration: 20.0,
            noise_std: 0.05,
            rng_seed: 7,
            ..Default::default()
        };
        let log = run_scenario(&cfg).unwrap();
        for r in &log.records {
            let d = distance(r.follower_pos, r.target_pos);
            assert!((r.lambda - d).abs() <= 1e-9 * d.max(1.0));
            assert_eq!(r.constraint_active, (r.u_star - r.u_des).norm() > 1e-9);
            assert!((r.h - (r.lambda - cfg.filter.d_min)).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_configs_give_identical_logs() {
        let cfg = ScenarioConfig {
            noise_std: 0.1,
            rng_seed: 123,
            duration: 5.0,
            ..Default::default()
        };
        let a = run_scenario(&cfg).unwrap();
        let b = run_scenario(&cfg).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = ScenarioConfig { duration: -1.0, ..Default::default() };
        assert!(matches!(run_scenario(&cfg), Err(SimError::Invalid(_))));
    }

    #[test]
    fn sweep_rows_follow_input_order() {
        let base = ScenarioConfig { duration: 2.0, ..Default::default() };
        let rows = alpha_sweep(&base, &[0.5, 0.8, 1.0, 1.3, 1.5, 1.8, 2.0]).unwrap();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0].0, 0.5);
        assert_eq!(rows[6].0, 2.0);
    }

    #[test]
    fn sweep_with_base_alpha_reproduces_plain_run() {
        let base = ScenarioConfig { duration: 5.0, ..Default::default() };
        let direct = summarize(&run_scenario(&base).unwrap()).unwrap();
        let rows = alpha_sweep(&base, &[base.filter.alpha]).unwrap();
        assert_eq!(rows[0].1, direct);
    }

    #[test]
    fn latency_zero_row_matches_plain_run() {
        let base = ScenarioConfig { duration: 5.0, sensing_latency: 0.0, ..Default::default() };
        let direct = summarize(&run_scenario(&base).unwrap()).unwrap();
        let rows = latency_sweep(&base, &[0.0, 0.05]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].1, direct);
    }

    #[test]
    fn sweeps_reject_bad_values() {
        let base = ScenarioConfig { duration: 1.0, ..Default::default() };
        assert!(alpha_sweep(&base, &[]).is_err());
        assert!(alpha_sweep(&base, &[1.0, -0.5]).is_err());
        assert!(latency_sweep(&base, &[-0.01]).is_err());
    }

    #[test]
    fn response_time_measures_onset_delay() {
        // Follower parked exactly at the safety boundary; the target only
        // starts receding at t = 2, and the follower may not move before
        // the sensed barrier rises.
        let cfg = ScenarioConfig {
            script: TargetScript::straight_forward(Vec3::new(3.0, 0.0, 0.0), 1.0, 2.0, 20.0),
            duration: 20.0,
            ..Default::default()
        };
        let m = summarize(&run_scenario(&cfg).unwrap()).unwrap();
        let rt = m.response_time.expect("follower responds");
        // Speed exceeds 0.1 m/s once alpha * h > 0.1, about 0.1 s in.
        assert!(rt > 0.0 && rt < 0.3, "response_time {rt}");
    }
}
