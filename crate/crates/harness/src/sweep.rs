//! One-parameter sweeps and single-knob calibration over scenario files.

use serde::{Deserialize, Serialize};

use crate::config::{scenario_from_value, Calibration, Metric};
use crate::error::{HarnessError, Result};
use crate::run::{run_scenario, Overrides, RunReport};

/// Replaces the scalar at a dotted `path` (array elements by index, e.g.
/// `beam1.0.focal_length`). The replacement keeps the type of the value it
/// replaces; integers may become floats.
pub fn set_path(root: &mut toml::Value, path: &str, raw: &str) -> Result<()> {
    let mut node = root;
    for segment in path.split('.') {
        node = match node {
            toml::Value::Table(t) => t.get_mut(segment),
            toml::Value::Array(a) => segment.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
            _ => None,
        }
        .ok_or_else(|| HarnessError::Config(format!("parameter path `{path}` does not resolve at `{segment}`")))?;
    }
    let raw = raw.trim();
    let parse_float = || {
        raw.parse::<f64>().map_err(|_| HarnessError::Config(format!("`{raw}` is not a number (parameter `{path}`)")))
    };
    *node = match node {
        toml::Value::Integer(_) => match raw.parse::<i64>() {
            Ok(i) => toml::Value::Integer(i),
            Err(_) => toml::Value::Float(parse_float()?),
        },
        toml::Value::Float(_) => toml::Value::Float(parse_float()?),
        toml::Value::Boolean(_) => toml::Value::Boolean(
            raw.parse().map_err(|_| HarnessError::Config(format!("`{raw}` is not a boolean (parameter `{path}`)")))?,
        ),
        toml::Value::String(_) => toml::Value::String(raw.to_string()),
        _ => return Err(HarnessError::Config(format!("parameter `{path}` is not a scalar"))),
    };
    Ok(())
}

/// Direction check of one column along the sweep order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monotonicity {
    pub non_increasing: bool,
    pub non_decreasing: bool,
}

impl Monotonicity {
    /// Steps smaller than `tol` count as flat.
    pub fn of(values: &[f64], tol: f64) -> Self {
        Self {
            non_increasing: values.windows(2).all(|w| w[1] <= w[0] + tol),
            non_decreasing: values.windows(2).all(|w| w[1] >= w[0] - tol),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: String,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub parameter: String,
    pub rows: Vec<SweepRow>,
    pub visibility_0: Monotonicity,
    pub visibility_45: Monotonicity,
}

/// Tolerance for the monotonicity diagnostics.
const FLAT: f64 = 1e-9;

fn run_value(base: &toml::Value, file: &str, path: &str, raw: &str, overrides: &Overrides) -> Result<RunReport> {
    let mut value = base.clone();
    set_path(&mut value, path, raw)?;
    let mut scenario = scenario_from_value(value, file)?;
    overrides.apply(&mut scenario)?;
    run_scenario(&scenario)
}

pub fn sweep(base: &toml::Value, file: &str, path: &str, values: &[String], overrides: &Overrides) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(HarnessError::Config("sweep needs at least one value".into()));
    }
    let rows = values
        .iter()
        .map(|v| Ok(SweepRow { value: v.clone(), report: run_value(base, file, path, v, overrides)? }))
        .collect::<Result<Vec<_>>>()?;
    let column = |f: fn(&RunReport) -> f64| rows.iter().map(|r| f(&r.report)).collect::<Vec<_>>();
    Ok(SweepTable {
        parameter: path.to_string(),
        visibility_0: Monotonicity::of(&column(|r| r.visibility_0), FLAT),
        visibility_45: Monotonicity::of(&column(|r| r.visibility_45), FLAT),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub knob: String,
    pub metric: Metric,
    pub target: f64,
    pub value: f64,
    pub achieved: f64,
    pub evaluations: usize,
}

/// Tunes one knob by bisection until `metric` is within `tolerance` of the
/// target. The metric must cross the target inside the bracket.
pub fn calibrate(base: &toml::Value, file: &str, cal: &Calibration, overrides: &Overrides) -> Result<CalibrationResult> {
    let mut evaluations = 0;
    let mut eval = |x: f64| -> Result<f64> {
        evaluations += 1;
        let report = run_value(base, file, &cal.knob, &format!("{x:e}"), overrides)?;
        Ok(report.metric(cal.metric) - cal.target)
    };
    let [mut lo, mut hi] = cal.bracket;
    let mut f_lo = eval(lo)?;
    let f_hi = eval(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(HarnessError::Config(format!(
            "calibration of `{}`: {:?} does not cross {} between {lo} and {hi}",
            cal.knob, cal.metric, cal.target
        )));
    }
    let (mut best, mut best_err) = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for _ in 0..60 {
        if best_err.abs() <= cal.tolerance {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if f_mid.abs() < best_err.abs() {
            best = mid;
            best_err = f_mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(CalibrationResult {
        knob: cal.knob.clone(),
        metric: cal.metric,
        target: cal.target,
        value: best,
        achieved: best_err + cal.target,
        evaluations,
    })
}
