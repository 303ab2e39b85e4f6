//! Flat `key = value` scenario config files.
//!
//! One scenario per file; `#` starts a comment; blank lines are ignored.
//! Unknown and duplicate keys are hard errors so typos cannot silently
//! fall back to defaults. Recognized keys:
//!
//! | key               | value                                   | default          |
//! |-------------------|-----------------------------------------|------------------|
//! | scenario          | straight_forward, straight_backward, multi_turn, from_file | straight_forward |
//! | waypoints         | `x,y,z; x,y,z; ...` (multi_turn/from_file only) | built-in multi-turn path |
//! | speed             | target speed, m/s                       | 1.5              |
//! | d_min             | safety distance, m                      | 3.0              |
//! | alpha             | barrier gain, 1/s                       | 1.0              |
//! | v_max             | pursuit gain and per-axis clamp         | 2.0              |
//! | mode              | basic or target_aware                   | basic            |
//! | clamp_desired     | true or false                           | true             |
//! | plant             | ideal or lag                            | ideal            |
//! | tau               | lag time constant, s                    | 0.3              |
//! | dt                | control step, s                         | 0.01             |
//! | duration          | run length, s                           | 30.0             |
//! | follower_start    | `x,y,z`                                 | 0,0,0            |
//! | target_start      | `x,y,z` (straight scenarios)            | 5,0,0            |
//! | sensing_latency   | s                                       | 0.0              |
//! | noise_std         | m                                       | 0.0              |
//! | rng_seed          | u64                                     | 0                |
//! | collision_radius  | m                                       | 0.5              |
//!
//! Straight scenarios move the target from `target_start` for the whole
//! run. Waypoint scenarios start at the first waypoint and ignore
//! `target_start`.

use cbf_pursuit::{
    FilterMode, FilterParams, PlantModel, PlantParams, ScenarioConfig, TargetScript, Vec3,
};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Validation(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Parse { line, msg: msg.into() }
}

const KEYS: &[&str] = &[
    "scenario",
    "waypoints",
    "speed",
    "d_min",
    "alpha",
    "v_max",
    "mode",
    "clamp_desired",
    "plant",
    "tau",
    "dt",
    "duration",
    "follower_start",
    "target_start",
    "sensing_latency",
    "noise_std",
    "rng_seed",
    "collision_radius",
];

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>().map_err(|_| parse_err(line, format!("{key}: expected a number, got '{v}'")))
}

fn parse_u64(line: usize, key: &str, v: &str) -> Result<u64, ConfigError> {
    v.parse::<u64>()
        .map_err(|_| parse_err(line, format!("{key}: expected an unsigned integer, got '{v}'")))
}

fn parse_bool(line: usize, key: &str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(parse_err(line, format!("{key}: expected true or false, got '{v}'"))),
    }
}

fn parse_vec3(line: usize, key: &str, v: &str) -> Result<Vec3, ConfigError> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(parse_err(line, format!("{key}: expected 'x,y,z', got '{v}'")));
    }
    Ok(Vec3::new(
        parse_f64(line, key, parts[0])?,
        parse_f64(line, key, parts[1])?,
        parse_f64(line, key, parts[2])?,
    ))
}

fn parse_waypoints(line: usize, v: &str) -> Result<Vec<Vec3>, ConfigError> {
    let mut out = Vec::new();
    for part in v.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(parse_vec3(line, "waypoints", part)?);
    }
    if out.is_empty() {
        return Err(parse_err(line, "waypoints: no triples found"));
    }
    Ok(out)
}

/// Parse and validate one scenario config. Unspecified keys take the
/// documented defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut values: HashMap<&str, (usize, String)> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim();
        let value = value.trim().to_string();
        let key = *KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| parse_err(line_no, format!("unknown key '{key}'")))?;
        if let Some(first) = seen.insert(key, line_no) {
            return Err(parse_err(line_no, format!("duplicate key '{key}' (first on line {first})")));
        }
        if value.is_empty() {
            return Err(parse_err(line_no, format!("{key}: empty value")));
        }
        values.insert(key, (line_no, value));
    }

    let get = |key: &str| values.get(key).cloned();

    let scenario = match get("scenario") {
        Some((line, v)) => match v.as_str() {
            "straight_forward" | "straight_backward" | "multi_turn" | "from_file" => v,
            _ => return Err(parse_err(line, format!("scenario: unknown value '{v}'"))),
        },
        None => "straight_forward".to_string(),
    };

    let mode = match get("mode") {
        Some((line, v)) => match v.as_str() {
            "basic" => FilterMode::Basic,
            "target_aware" => FilterMode::TargetAware,
            _ => return Err(parse_err(line, format!("mode: expected basic or target_aware, got '{v}'"))),
        },
        None => FilterMode::Basic,
    };

    let plant_model = match get("plant") {
        Some((line, v)) => match v.as_str() {
            "ideal" => PlantModel::Ideal,
            "lag" => PlantModel::FirstOrderLag,
            _ => return Err(parse_err(line, format!("plant: expected ideal or lag, got '{v}'"))),
        },
        None => PlantModel::Ideal,
    };

    let num = |key: &str, default: f64| -> Result<f64, ConfigError> {
        match get(key) {
            Some((line, v)) => parse_f64(line, key, &v),
            None => Ok(default),
        }
    };

    let speed = num("speed", 1.5)?;
    let d_min = num("d_min", 3.0)?;
    let alpha = num("alpha", 1.0)?;
    let v_max = num("v_max", 2.0)?;
    let tau = num("tau", 0.3)?;
    let dt = num("dt", 0.01)?;
    let duration = num("duration", 30.0)?;
    let sensing_latency = num("sensing_latency", 0.0)?;
    let noise_std = num("noise_std", 0.0)?;
    let collision_radius = num("collision_radius", 0.5)?;

    let clamp_desired = match get("clamp_desired") {
        Some((line, v)) => parse_bool(line, "clamp_desired", &v)?,
        None => true,
    };
    let rng_seed = match get("rng_seed") {
        Some((line, v)) => parse_u64(line, "rng_seed", &v)?,
        None => 0,
    };
    let follower_start = match get("follower_start") {
        Some((line, v)) => parse_vec3(line, "follower_start", &v)?,
        None => Vec3::ZERO,
    };
    let target_start = match get("target_start") {
        Some((line, v)) => parse_vec3(line, "target_start", &v)?,
        None => Vec3::new(5.0, 0.0, 0.0),
    };
    let waypoints = match get("waypoints") {
        Some((line, v)) => Some(parse_waypoints(line, &v)?),
        None => None,
    };

    let script = match scenario.as_str() {
        "straight_forward" | "straight_backward" => {
            if waypoints.is_some() {
                return Err(ConfigError::Validation(
                    "waypoints only apply to multi_turn or from_file scenarios".into(),
                ));
            }
            if scenario == "straight_forward" {
                TargetScript::straight_forward(target_start, speed, 0.0, duration)
            } else {
                TargetScript::straight_backward(target_start, speed, 0.0, duration)
            }
        }
        "multi_turn" => {
            let points = waypoints
                .unwrap_or_else(|| TargetScript::default_multi_turn().waypoints);
            TargetScript::multi_turn(points, speed, 0.0)
        }
        "from_file" => {
            let points = waypoints.ok_or_else(|| {
                ConfigError::Validation("from_file scenario requires a waypoints key".into())
            })?;
            let mut script = TargetScript::multi_turn(points, speed, 0.0);
            script.kind = cbf_pursuit::ScriptKind::FromFile;
            script
        }
        _ => unreachable!("scenario validated above"),
    };

    let cfg = ScenarioConfig {
        script,
        plant: PlantParams { model: plant_model, tau, dt },
        filter: FilterParams { d_min, alpha, v_max, mode, clamp_desired },
        follower_start,
        duration,
        sensing_latency,
        noise_std,
        rng_seed,
        collision_radius,
    };
    cfg.validate().map_err(|e| ConfigError::Validation(e.0))?;
    Ok(cfg)
}
