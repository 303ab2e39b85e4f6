//! CSV log and JSON metrics serialization.
//!
//! Numbers are written with 9 significant digits in exponent form so
//! regression diffs are byte-stable across runs. Reported metrics are
//! computed from the rounded values actually written to the log, which
//! makes recomputing them from the CSV reproduce metrics.json.

use cbf_pursuit::{Metrics, ScenarioConfig, StepRecord, Vec3};
use serde::Serialize;
use thiserror::Error;

/// Column order of the step log.
pub const CSV_HEADER: &str =
    "t,f_x,f_y,f_z,g_x,g_y,g_z,udes_x,udes_y,udes_z,u_x,u_y,u_z,h,lambda,active";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("line {line}: expected {expected} fields, got {got}")]
    FieldCount { line: usize, expected: usize, got: usize },
    #[error("line {line}: bad value '{value}'")]
    BadValue { line: usize, value: String },
    #[error("missing or wrong header line")]
    BadHeader,
}

/// Format with 9 significant digits.
pub fn fmt9(v: f64) -> String {
    format!("{v:.8e}")
}

fn fmt_vec3(v: Vec3, out: &mut String) {
    out.push_str(&fmt9(v.x));
    out.push(',');
    out.push_str(&fmt9(v.y));
    out.push(',');
    out.push_str(&fmt9(v.z));
}

/// Render the step log as CSV, header included.
pub fn records_to_csv(records: &[StepRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&fmt9(r.t));
        out.push(',');
        fmt_vec3(r.follower_pos, &mut out);
        out.push(',');
        fmt_vec3(r.target_pos, &mut out);
        out.push(',');
        fmt_vec3(r.u_des, &mut out);
        out.push(',');
        fmt_vec3(r.u_star, &mut out);
        out.push(',');
        out.push_str(&fmt9(r.h));
        out.push(',');
        out.push_str(&fmt9(r.lambda));
        out.push(',');
        out.push(if r.constraint_active { '1' } else { '0' });
        out.push('\n');
    }
    out
}

/// Parse a step log produced by [`records_to_csv`].
pub fn records_from_csv(text: &str) -> Result<Vec<StepRecord>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => return Err(CsvError::BadHeader),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 16 {
            return Err(CsvError::FieldCount { line: line_no, expected: 16, got: fields.len() });
        }
        let num = |i: usize| -> Result<f64, CsvError> {
            fields[i]
                .parse::<f64>()
                .map_err(|_| CsvError::BadValue { line: line_no, value: fields[i].to_string() })
        };
        let vec = |i: usize| -> Result<Vec3, CsvError> {
            Ok(Vec3::new(num(i)?, num(i + 1)?, num(i + 2)?))
        };
        let active = match fields[15] {
            "0" => false,
            "1" => true,
            other => return Err(CsvError::BadValue { line: line_no, value: other.to_string() }),
        };
        records.push(StepRecord {
            t: num(0)?,
            follower_pos: vec(1)?,
            target_pos: vec(4)?,
            u_des: vec(7)?,
            u_star: vec(10)?,
            h: num(13)?,
            lambda: num(14)?,
            constraint_active: active,
        });
    }
    Ok(records)
}

#[derive(Serialize)]
struct MetricsDoc<'a> {
    #[serde(flatten)]
    metrics: &'a Metrics,
    config: &'a ScenarioConfig,
}

/// Metrics plus the fully resolved config, so the file is self-describing.
pub fn metrics_to_json(metrics: &Metrics, config: &ScenarioConfig) -> String {
    let mut s = serde_json::to_string_pretty(&MetricsDoc { metrics, config })
        .expect("metrics serialize");
    s.push('\n');
    s
}

/// One row per run of a parameter sweep; `param` names the first column.
pub fn sweep_to_csv(param: &str, rows: &[(f64, Metrics)]) -> String {
    let mut out = String::new();
    out.push_str(param);
    out.push_str(",lambda_mean,lambda_min,h_min,collision,response_time,steady_state_lambda\n");
    for (value, m) in rows {
        out.push_str(&fmt9(*value));
        out.push(',');
        out.push_str(&fmt9(m.lambda_mean));
        out.push(',');
        out.push_str(&fmt9(m.lambda_min));
        out.push(',');
        out.push_str(&fmt9(m.h_min));
        out.push(',');
        out.push(if m.collision { '1' } else { '0' });
        out.push(',');
        if let Some(rt) = m.response_time {
            out.push_str(&fmt9(rt));
        }
        out.push(',');
        out.push_str(&fmt9(m.steady_state_lambda));
        out.push('\n');
    }
    out
}
