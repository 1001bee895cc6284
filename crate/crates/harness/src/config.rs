//! Scenario files: a versioned TOML schema describing the source, the two
//! beam lines and what to measure.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCENARIO_SCHEMA: &str = "plasment-scenario/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    pub source: SourceConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub placement: Placement,
    #[serde(default)]
    pub arrays: BTreeMap<String, ArrayConfig>,
    #[serde(default)]
    pub beam1: Vec<ElementConfig>,
    #[serde(default)]
    pub beam2: Vec<ElementConfig>,
    #[serde(default)]
    pub measure: MeasureConfig,
    /// Knobs tuned to a target value, one knob per target.
    #[serde(default)]
    pub calibration: Vec<Calibration>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    /// Pump spot size `w` at the plane the state is built, metres.
    pub spot_size: f64,
    /// Transverse coherence length `σ_c`, metres.
    pub coherence_length: f64,
    #[serde(default = "default_phase")]
    pub phase_deg: f64,
    /// Magnitude ratio of the VH to the HV amplitude.
    #[serde(default = "one")]
    pub imbalance: f64,
    /// Standard deviation of the shot-to-shot fluctuation of the phase θ.
    #[serde(default)]
    pub phase_jitter_deg: f64,
    /// Weight of the unpolarized admixture in the detected pair density.
    #[serde(default)]
    pub background: f64,
    #[serde(default = "default_wavelength")]
    pub wavelength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Window width in metres; chosen from the source when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { dim: default_dim(), points: default_points(), extent: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// Arrays sit in the one-to-one image of the pumped crystal area.
    #[default]
    ImagePlane,
    /// Arrays sit in the focus of a confocal telescope; the source block
    /// describes the beam at that focus.
    Focused,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrayPreset {
    /// 5% peak transmission.
    #[serde(rename = "array-1")]
    Array1,
    /// 3% peak transmission.
    #[serde(rename = "array-2")]
    Array2,
    Custom,
}

/// A hole array: a preset plus optional overrides of its model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub preset: ArrayPreset,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_transmission: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub propagation_length: Option<f64>,
    /// Signed ratio `t0 / t_sp` of direct to plasmon amplitude.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude_ratio: Option<f64>,
    /// rad/m along the first plasmon axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retardance_gradient: Option<f64>,
    /// Amplitude scalings of H and V after the array.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anisotropy: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sp_axes_deg: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance_center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ElementConfig {
    Polarizer { angle_deg: f64 },
    HalfWave { axis_deg: f64 },
    Compensator { phase_deg: f64 },
    /// Angular aperture, half-angle in radians.
    Aperture { half_angle: f64 },
    Lens { focal_length: f64 },
    Array { array: String },
    /// Confocal lens pair with the named array at the common focus.
    Telescope { focal_length: f64, array: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    /// Fixed P2 angles of the fringe scans.
    #[serde(default = "default_fringes")]
    pub fringes_deg: Vec<f64>,
    #[serde(default = "default_step")]
    pub fringe_step_deg: f64,
    #[serde(default = "default_steps")]
    pub fringe_steps: usize,
    #[serde(default = "yes")]
    pub chsh: bool,
    /// `[a, a′, b, b′]`.
    #[serde(default = "default_chsh_angles")]
    pub chsh_angles_deg: [f64; 4],
    /// Counting runs, spread evenly over the 16 CHSH settings.
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// Seconds per run.
    #[serde(default = "default_duration")]
    pub duration: f64,
    /// Source coincidence rate without elements, s⁻¹.
    #[serde(default = "default_source_rate")]
    pub source_rate: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            fringes_deg: default_fringes(),
            fringe_step_deg: default_step(),
            fringe_steps: default_steps(),
            chsh: true,
            chsh_angles_deg: default_chsh_angles(),
            runs: default_runs(),
            duration: default_duration(),
            source_rate: default_source_rate(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[serde(rename = "visibility_0")]
    Visibility0,
    #[serde(rename = "visibility_45")]
    Visibility45,
    Overlap,
    AbsS,
    CoincidenceRate,
}

/// Record of a knob tuned so that `metric` reaches `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    /// Dotted path of the knob inside this file.
    pub knob: String,
    pub metric: Metric,
    pub target: f64,
    /// Search interval for the knob.
    pub bracket: [f64; 2],
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_phase() -> f64 {
    180.0
}
fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_wavelength() -> f64 {
    plasment_core::DEGENERATE_WAVELENGTH
}
fn default_dim() -> usize {
    2
}
fn default_points() -> usize {
    24
}
fn default_fringes() -> Vec<f64> {
    vec![0.0, 45.0]
}
fn default_step() -> f64 {
    10.0
}
fn default_steps() -> usize {
    18
}
fn default_chsh_angles() -> [f64; 4] {
    [0.0, 45.0, 22.5, 67.5]
}
fn default_runs() -> usize {
    16
}
fn default_duration() -> f64 {
    100.0
}
fn default_source_rate() -> f64 {
    plasment_core::measurement::SOURCE_COINCIDENCE_RATE
}
fn default_tolerance() -> f64 {
    1e-3
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.schema != SCENARIO_SCHEMA {
            return bad(format!("schema `{}` is not supported (expected `{SCENARIO_SCHEMA}`)", self.schema));
        }
        if !(0.0..=1.0).contains(&self.source.background) {
            return bad(format!("source.background = {} is outside [0, 1]", self.source.background));
        }
        if !(self.source.phase_jitter_deg >= 0.0) || !self.source.phase_jitter_deg.is_finite() {
            return bad(format!("source.phase_jitter_deg = {} must be ≥ 0", self.source.phase_jitter_deg));
        }
        if !matches!(self.grid.dim, 1 | 2) {
            return bad(format!("grid.dim = {} must be 1 or 2", self.grid.dim));
        }
        let mut telescopes = 0;
        for (beam, chain) in [("beam1", &self.beam1), ("beam2", &self.beam2)] {
            for (i, el) in chain.iter().enumerate() {
                let name = match el {
                    ElementConfig::Array { array } => {
                        if self.placement == Placement::Focused {
                            return bad(format!(
                                "{beam}[{i}]: focused placement puts arrays inside a telescope, not bare"
                            ));
                        }
                        Some(array)
                    }
                    ElementConfig::Telescope { array, .. } => {
                        if self.placement != Placement::Focused {
                            return bad(format!("{beam}[{i}]: telescopes need placement = \"focused\""));
                        }
                        telescopes += 1;
                        Some(array)
                    }
                    _ => None,
                };
                if let Some(name) = name {
                    if !self.arrays.contains_key(name) {
                        return bad(format!("{beam}[{i}]: array `{name}` is not defined under [arrays]"));
                    }
                }
            }
        }
        if self.placement == Placement::Focused && telescopes == 0 {
            return bad("focused placement requires a telescope in at least one beam".into());
        }
        let m = &self.measure;
        if m.runs == 0 || m.runs % 16 != 0 {
            return bad(format!("measure.runs = {} must be a positive multiple of the 16 CHSH settings", m.runs));
        }
        if !(m.duration >= 0.0) || !m.duration.is_finite() {
            return bad(format!("measure.duration = {} must be ≥ 0", m.duration));
        }
        for c in &self.calibration {
            if !(c.bracket[0] < c.bracket[1]) {
                return bad(format!("calibration of `{}`: bracket must be increasing", c.knob));
            }
        }
        Ok(())
    }
}

/// Parses TOML text into a scenario, reporting the path of any offending key.
pub fn parse_scenario(text: &str, file: &str) -> Result<(Scenario, toml::Value)> {
    let value: toml::Value =
        toml::from_str(text).map_err(|e| HarnessError::Parse { file: file.into(), message: e.to_string() })?;
    Ok((scenario_from_value(value.clone(), file)?, value))
}

pub fn scenario_from_value(value: toml::Value, file: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_path_to_error::deserialize(value).map_err(|e| HarnessError::Schema {
        file: file.into(),
        key: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })
}

pub fn load_scenario(path: &Path) -> Result<(Scenario, toml::Value)> {
    parse_scenario(&read_file(path)?, &path.display().to_string())
}
