//! Closed-loop properties of the simulator checked against an independent
//! one-dimensional reference model and against closed-form equilibria.
//!
//! For collinear motion the loop reduces to scalar separation dynamics:
//! the follower closes at the clamped pursuit speed unless the barrier
//! bound caps it. Equilibria follow directly: a receding target settles at
//! `d_min + v_t / alpha`, an approaching one (basic mode) at
//! `d_min - v_a / alpha`, and a static one at `d_min`.

use cbf_pursuit::{
    alpha_sweep, latency_sweep, run_scenario, summarize, FilterMode, FilterParams, PlantParams,
    ScenarioConfig, TargetScript, Vec3,
};

/// Scalar reference simulation of the separation dynamics, written
/// directly from the 1D geometry with no shared code with the simulator.
/// `v_target` is the target's signed rate of separation change (positive
/// recedes, negative approaches).
fn reference_lambda(
    lambda0: f64,
    v_target: f64,
    p: &FilterParams,
    target_aware: bool,
    dt: f64,
    t_end: f64,
) -> Vec<f64> {
    let steps = (t_end / dt).round() as usize;
    let mut lambda = lambda0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(lambda);
    for _ in 0..steps {
        let u_des = (lambda * p.v_max).min(p.v_max);
        let mut cap = p.alpha * (lambda - p.d_min);
        if target_aware {
            cap += v_target;
        }
        let u = u_des.min(cap);
        lambda += (v_target - u) * dt;
        out.push(lambda);
    }
    out
}

fn base_config() -> ScenarioConfig {
    ScenarioConfig {
        script: TargetScript::straight_forward(Vec3::new(10.0, 0.0, 0.0), 0.0, 0.0, 30.0),
        plant: PlantParams { dt: 1e-3, ..Default::default() },
        duration: 30.0,
        ..Default::default()
    }
}

#[test]
fn static_target_converges_to_safety_boundary() {
    let cfg = base_config();
    let log = run_scenario(&cfg).unwrap();
    let final_lambda = log.records.last().unwrap().lambda;
    assert!((final_lambda - 3.0).abs() <= 0.01, "final lambda {final_lambda}");

    let reference = reference_lambda(10.0, 0.0, &cfg.filter, false, 1e-4, 30.0);
    let ref_final = *reference.last().unwrap();
    assert!((ref_final - 3.0).abs() <= 1e-3, "reference final {ref_final}");
    assert!((final_lambda - ref_final).abs() <= 5e-3);
}

#[test]
fn barrier_never_decays_faster_than_exponential() {
    let cfg = base_config();
    let log = run_scenario(&cfg).unwrap();
    let h0 = log.records[0].h;
    let alpha = cfg.filter.alpha;
    let mut h_min = f64::INFINITY;
    for r in &log.records {
        let floor = h0 * (-alpha * r.t).exp() - 1e-3;
        assert!(r.h >= floor, "h {} below exponential floor {} at t {}", r.h, floor, r.t);
        h_min = h_min.min(r.h);
    }
    assert!(h_min >= -1e-3, "h_min {h_min}");
}

#[test]
fn receding_target_settles_at_expected_standoff() {
    let mut cfg = base_config();
    cfg.script = TargetScript::straight_forward(Vec3::new(5.0, 0.0, 0.0), 1.0, 0.0, 30.0);
    cfg.plant.dt = 0.01;
    let m = summarize(&run_scenario(&cfg).unwrap()).unwrap();
    assert!((m.steady_state_lambda - 4.0).abs() <= 0.05, "standoff {}", m.steady_state_lambda);

    let reference = reference_lambda(5.0, 1.0, &cfg.filter, false, 1e-4, 30.0);
    let ref_final = *reference.last().unwrap();
    assert!((ref_final - 4.0).abs() <= 1e-3, "reference standoff {ref_final}");
}

#[test]
fn approaching_target_basic_mode_gives_ground_but_stays_safe() {
    let mut cfg = base_config();
    cfg.script = TargetScript::straight_backward(Vec3::new(6.0, 0.0, 0.0), 1.0, 0.0, 20.0);
    cfg.duration = 20.0;
    cfg.plant.dt = 0.01;
    let m = summarize(&run_scenario(&cfg).unwrap()).unwrap();
    assert!((m.steady_state_lambda - 2.0).abs() <= 0.05, "standoff {}", m.steady_state_lambda);
    assert!(!m.collision);

    let reference = reference_lambda(6.0, -1.0, &cfg.filter, false, 1e-4, 20.0);
    let ref_final = *reference.last().unwrap();
    assert!((ref_final - 2.0).abs() <= 1e-3, "reference standoff {ref_final}");
}

#[test]
fn target_aware_never_cedes_more_than_basic() {
    for speed in [0.5, 1.0, 1.5] {
        let mut basic = base_config();
        basic.script = TargetScript::straight_backward(Vec3::new(6.0, 0.0, 0.0), speed, 0.0, 20.0);
        basic.duration = 20.0;
        basic.plant.dt = 0.01;
        let mut aware = basic.clone();
        aware.filter.mode = FilterMode::TargetAware;

        let m_basic = summarize(&run_scenario(&basic).unwrap()).unwrap();
        let m_aware = summarize(&run_scenario(&aware).unwrap()).unwrap();
        assert!(
            m_aware.steady_state_lambda >= m_basic.steady_state_lambda,
            "speed {speed}: aware {} < basic {}",
            m_aware.steady_state_lambda,
            m_basic.steady_state_lambda
        );
        assert!(
            m_aware.steady_state_lambda >= basic.filter.d_min - 0.05,
            "speed {speed}: aware standoff {}",
            m_aware.steady_state_lambda
        );
    }
}

#[test]
fn standoff_strictly_decreases_with_alpha() {
    let mut cfg = base_config();
    cfg.script = TargetScript::straight_forward(Vec3::new(5.0, 0.0, 0.0), 1.0, 0.0, 30.0);
    cfg.plant.dt = 0.01;
    let rows = alpha_sweep(&cfg, &[0.5, 0.8, 1.0, 1.3, 1.5, 1.8, 2.0]).unwrap();
    for pair in rows.windows(2) {
        assert!(
            pair[1].1.steady_state_lambda < pair[0].1.steady_state_lambda,
            "standoff not strictly decreasing: {:?} -> {:?}",
            pair[0],
            pair[1]
        );
    }
    // Spot-check the closed-form ends of the grid.
    assert!((rows[0].1.steady_state_lambda - 5.0).abs() <= 0.1);
    assert!((rows[6].1.steady_state_lambda - 3.5).abs() <= 0.1);
}

#[test]
fn filter_stays_inactive_beyond_reach() {
    // While lambda > d_min + v_max / alpha the clamped pursuit command
    // cannot violate the barrier bound.
    let mut cfg = base_config();
    cfg.script = TargetScript::straight_forward(Vec3::new(20.0, 0.0, 0.0), 0.0, 0.0, 30.0);
    cfg.plant.dt = 0.01;
    let threshold = cfg.filter.d_min + cfg.filter.v_max / cfg.filter.alpha;
    let log = run_scenario(&cfg).unwrap();
    let mut seen_far = 0;
    for r in &log.records {
        if r.lambda > threshold + 0.01 {
            assert!(!r.constraint_active, "active at lambda {}", r.lambda);
            seen_far += 1;
        }
    }
    assert!(seen_far > 100, "scenario never exercised the far region");
}

#[test]
fn stale_sensing_costs_separation() {
    let mut cfg = base_config();
    cfg.script = TargetScript::straight_backward(Vec3::new(3.0, 0.0, 0.0), 2.0, 0.0, 15.0);
    cfg.duration = 15.0;
    let rows = latency_sweep(&cfg, &[0.0, 0.1]).unwrap();
    assert!(
        rows[1].1.lambda_min < rows[0].1.lambda_min,
        "100 ms latency did not reduce lambda_min: {:?}",
        rows
    );
}

#[test]
fn response_time_grows_with_latency() {
    let mut cfg = base_config();
    cfg.script = TargetScript::straight_forward(Vec3::new(3.0, 0.0, 0.0), 1.0, 2.0, 20.0);
    cfg.duration = 20.0;
    let rows = latency_sweep(&cfg, &[0.0, 0.05, 0.2]).unwrap();
    let times: Vec<f64> = rows.iter().map(|(_, m)| m.response_time.expect("responds")).collect();
    assert!(times[0] <= times[1] && times[1] <= times[2], "times {times:?}");
    assert!(times[2] >= times[0] + 0.15, "latency not reflected: {times:?}");
}
